//! Nonlinear recursive count systems. The height-`n` pattern counts of a
//! nearest-neighbour tree shift satisfy, per root symbol `i`,
//!
//! ```text
//! γ_{i;n} = Σ_{(i, i_1, …, i_d) ∈ B^(i)}  Π_j γ_{i_j; n-1},      γ_{i;1} = |B^(i)|,
//! ```
//!
//! which this module represents as one polynomial equation per symbol over
//! degree-`d` monomials with positive integer coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::sft::{BasicSet, Symbol};

/// A degree-`d` monomial over `k` symbols, stored as an exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exponents: Vec<u8>,
}

impl Monomial {
    pub fn new(exponents: Vec<u8>, d: usize) -> Result<Self> {
        let total: usize = exponents.iter().map(|&e| e as usize).sum();
        if total != d {
            return Err(Error::Validation(format!(
                "monomial exponents sum to {total}, expected degree {d}"
            )));
        }
        Ok(Self { exponents })
    }

    /// Monomial of the child tuple of a 2-block: the exponent of symbol `s`
    /// is the number of children coloured `s`.
    pub fn from_tuple(tuple: &[Symbol], k: usize) -> Self {
        let mut exponents = vec![0u8; k];
        for &s in tuple {
            exponents[s - 1] += 1;
        }
        Self { exponents }
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exponents
    }

    pub fn exponent_of(&self, s: Symbol) -> u8 {
        self.exponents[s - 1]
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    /// Symbols appearing with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, _)| j + 1)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "·")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", j + 1)?;
            } else {
                write!(f, "x{}^{}", j + 1, e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All degree-`d` monomials over `k` symbols in canonical order: descending
/// lexicographic on exponent vectors, so for `(d, k) = (2, 2)` the order is
/// `x1², x1·x2, x2²`.
pub fn canonical_monomials(d: usize, k: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u8; k];
    fn rec(out: &mut Vec<Monomial>, current: &mut Vec<u8>, pos: usize, remaining: usize) {
        if pos + 1 == current.len() {
            current[pos] = remaining as u8;
            out.push(Monomial { exponents: current.clone() });
            return;
        }
        // highest exponent first keeps descending-lex order
        for e in (0..=remaining).rev() {
            current[pos] = e as u8;
            rec(out, current, pos + 1, remaining - e);
        }
    }
    rec(&mut out, &mut current, 0, d);
    out
}

/// Coefficient vector of an equation over the canonical monomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorVector {
    coefficients: Vec<u64>,
}

impl IndicatorVector {
    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn weight(&self) -> u64 {
        self.coefficients.iter().sum()
    }
}

impl fmt::Display for IndicatorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// One symbol's recursion: a positive integer combination of monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnreEquation {
    owner: Symbol,
    d: usize,
    k: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl SnreEquation {
    pub fn new<I>(owner: Symbol, d: usize, k: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, u64)>,
    {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            if m.degree() != d {
                return Err(Error::Validation(format!(
                    "monomial {m} has degree {}, expected {d}",
                    m.degree()
                )));
            }
            if m.exponents().len() != k {
                return Err(Error::Validation(format!(
                    "monomial {m} ranges over {} symbols, expected {k}",
                    m.exponents().len()
                )));
            }
            if c == 0 {
                return Err(Error::Validation("coefficients must be positive".into()));
            }
            *map.entry(m).or_insert(0) += c;
        }
        Ok(Self { owner, d, k, terms: map })
    }

    pub fn owner(&self) -> Symbol {
        self.owner
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of items `|F^(i)|` (the coefficient sum), which equals the
    /// height-1 count when the equation comes from a basic set.
    pub fn items(&self) -> u64 {
        self.terms.values().sum()
    }

    /// Coefficients read off in canonical monomial order; absent monomials
    /// contribute zero.
    pub fn indicator_vector(&self) -> IndicatorVector {
        let coefficients = canonical_monomials(self.d, self.k)
            .into_iter()
            .map(|m| self.terms.get(&m).copied().unwrap_or(0))
            .collect();
        IndicatorVector { coefficients }
    }
}

impl fmt::Display for SnreEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // canonical (descending) order for display
        let mut first = true;
        for m in canonical_monomials(self.d, self.k) {
            if let Some(&c) = self.terms.get(&m) {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                if c == 1 {
                    write!(f, "{m}")?;
                } else {
                    write!(f, "{c}·{m}")?;
                }
            }
        }
        Ok(())
    }
}

/// The full recursive system: one equation per symbol, with the height-1
/// counts given by the item counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snre {
    d: usize,
    k: usize,
    equations: Vec<SnreEquation>,
}

impl Snre {
    pub fn new(d: usize, k: usize, equations: Vec<SnreEquation>) -> Result<Self> {
        if equations.len() != k {
            return Err(Error::Validation(format!(
                "expected {k} equations, got {}",
                equations.len()
            )));
        }
        for (i, eq) in equations.iter().enumerate() {
            if eq.owner() != i + 1 {
                return Err(Error::Validation(format!(
                    "equation {} owned by symbol {}",
                    i + 1,
                    eq.owner()
                )));
            }
            if eq.d != d || eq.k != k {
                return Err(Error::Validation("equation shape mismatch".into()));
            }
        }
        Ok(Self { d, k, equations })
    }

    /// Build the system from a basic set: the tuples of `B^(i)` collect into
    /// monomials with multiplicity, and `γ_{i;1} = |B^(i)|`.
    pub fn from_basic(b: &BasicSet) -> Self {
        let (d, k) = (b.d(), b.k());
        let equations = (1..=k)
            .map(|root| {
                let terms = b
                    .block(root)
                    .iter()
                    .map(|tuple| (Monomial::from_tuple(tuple, k), 1));
                SnreEquation::new(root, d, k, terms).expect("valid by construction")
            })
            .collect();
        Self { d, k, equations }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn equation(&self, s: Symbol) -> &SnreEquation {
        &self.equations[s - 1]
    }

    pub fn equations(&self) -> impl Iterator<Item = &SnreEquation> {
        self.equations.iter()
    }

    /// Height-1 count of symbol `s`.
    pub fn initial(&self, s: Symbol) -> u64 {
        self.equation(s).items()
    }

    pub fn initials(&self) -> Vec<u64> {
        (1..=self.k).map(|s| self.initial(s)).collect()
    }

    /// `a` induces `b`: some term of `F^(a)` has positive exponent on `b`.
    pub fn induces(&self, a: Symbol, b: Symbol) -> Result<bool> {
        self.check_symbol(a)?;
        self.check_symbol(b)?;
        Ok(self
            .equation(a)
            .terms()
            .any(|(m, _)| m.exponent_of(b) > 0))
    }

    /// `a` connects to `b`: a path of length at least one in the induces
    /// digraph. A symbol connects to itself only through an actual cycle.
    pub fn connects(&self, a: Symbol, b: Symbol) -> Result<bool> {
        self.check_symbol(a)?;
        self.check_symbol(b)?;
        let mut seen = vec![false; self.k];
        let mut stack: Vec<Symbol> = self
            .equation(a)
            .terms()
            .flat_map(|(m, _)| m.support().collect::<Vec<_>>())
            .collect();
        while let Some(c) = stack.pop() {
            if c == b {
                return Ok(true);
            }
            if seen[c - 1] {
                continue;
            }
            seen[c - 1] = true;
            stack.extend(self.equation(c).terms().flat_map(|(m, _)| m.support().collect::<Vec<_>>()));
        }
        Ok(false)
    }

    fn check_symbol(&self, s: Symbol) -> Result<()> {
        if s == 0 || s > self.k {
            return Err(Error::Validation(format!("symbol {s} out of range 1..={}", self.k)));
        }
        Ok(())
    }

    /// Partition of the symbols into comparability components: within one
    /// component, every pair `(a, b)` satisfies "`a` connects to `b` or `b`
    /// connects to `a`". Computed by condensing strongly connected
    /// components of the induces digraph and splitting the condensation
    /// into chains (greedily, in topological order — maximal antichains may
    /// admit several chain covers, any of which is acceptable).
    pub fn comparability_components(&self) -> Vec<BTreeSet<Symbol>> {
        // successors in the induces digraph
        let succ: Vec<BTreeSet<Symbol>> = (1..=self.k)
            .map(|a| {
                self.equation(a)
                    .terms()
                    .flat_map(|(m, _)| m.support().collect::<Vec<_>>())
                    .collect()
            })
            .collect();
        // strongly connected components via double reachability (k is small)
        let reach = |from: Symbol| -> BTreeSet<Symbol> {
            let mut seen = BTreeSet::new();
            let mut stack: Vec<Symbol> = succ[from - 1].iter().copied().collect();
            while let Some(c) = stack.pop() {
                if seen.insert(c) {
                    stack.extend(succ[c - 1].iter().copied());
                }
            }
            seen
        };
        let reachable: Vec<BTreeSet<Symbol>> = (1..=self.k).map(reach).collect();
        let mut component_of = vec![usize::MAX; self.k];
        let mut sccs: Vec<BTreeSet<Symbol>> = Vec::new();
        for a in 1..=self.k {
            if component_of[a - 1] != usize::MAX {
                continue;
            }
            let mut scc: BTreeSet<Symbol> = (a..=self.k)
                .filter(|&b| {
                    a == b
                        || (reachable[a - 1].contains(&b) && reachable[b - 1].contains(&a))
                })
                .collect();
            scc.insert(a);
            for &b in &scc {
                component_of[b - 1] = sccs.len();
            }
            sccs.push(scc);
        }
        // chain-split the condensation: append each SCC (in a topological
        // order) to a chain whose every member it is comparable with
        let comparable =
            |a: Symbol, b: Symbol| reachable[a - 1].contains(&b) || reachable[b - 1].contains(&a);
        let mut order: Vec<usize> = (0..sccs.len()).collect();
        order.sort_by_key(|&i| {
            let rep = *sccs[i].iter().next().unwrap();
            std::cmp::Reverse(reachable[rep - 1].len())
        });
        let mut chains: Vec<BTreeSet<Symbol>> = Vec::new();
        for i in order {
            let fits = chains.iter_mut().find(|chain| {
                chain
                    .iter()
                    .all(|&b| sccs[i].iter().all(|&a| comparable(a, b)))
            });
            match fits {
                Some(chain) => chain.extend(&sccs[i]),
                None => chains.push(sccs[i].clone()),
            }
        }
        chains.sort();
        chains
    }

    /// Symbols whose count stays positive forever: greatest fixpoint of
    /// "has a monomial supported on live symbols". Settles in at most `k`
    /// rounds.
    pub fn live_symbols(&self) -> BTreeSet<Symbol> {
        let mut live: BTreeSet<Symbol> = (1..=self.k).collect();
        loop {
            let next: BTreeSet<Symbol> = live
                .iter()
                .copied()
                .filter(|&i| {
                    self.equation(i)
                        .terms()
                        .any(|(m, _)| m.support().all(|s| live.contains(&s)))
                })
                .collect();
            if next == live {
                return live;
            }
            live = next;
        }
    }

    /// Essential / inessential / dead partition via the bounded fixpoint:
    /// seed with live symbols of height-1 count at least 2, close under
    /// "induces a seeded symbol through a live monomial".
    pub fn classify_symbols(&self) -> SymbolClassification {
        let live = self.live_symbols();
        let mut essential: BTreeSet<Symbol> = live
            .iter()
            .copied()
            .filter(|&s| self.initial(s) >= 2)
            .collect();
        let mut steps_used = 1;
        loop {
            let mut grew = false;
            for &a in &live {
                if essential.contains(&a) {
                    continue;
                }
                let hits = self.equation(a).terms().any(|(m, _)| {
                    m.support().all(|s| live.contains(&s))
                        && m.support().any(|s| essential.contains(&s))
                });
                if hits {
                    essential.insert(a);
                    grew = true;
                }
            }
            if !grew {
                break;
            }
            steps_used += 1;
        }
        let inessential = live.difference(&essential).copied().collect();
        let dead = (1..=self.k).filter(|s| !live.contains(s)).collect();
        SymbolClassification { essential, inessential, dead, steps_used }
    }

    /// Exact integer counts `γ_{i;m}` for `m = 1..=n`.
    pub fn exact_counts(&self, n: usize) -> Vec<Vec<BigUint>> {
        let mut cur: Vec<BigUint> = self.initials().iter().map(|&v| BigUint::from(v)).collect();
        let mut out = vec![cur.clone()];
        for _ in 1..n {
            let next: Vec<BigUint> = self
                .equations
                .iter()
                .map(|eq| {
                    let mut total = BigUint::zero();
                    for (m, c) in eq.terms() {
                        let mut term = BigUint::from(c);
                        for s in 1..=self.k {
                            let e = m.exponent_of(s);
                            if e > 0 {
                                if cur[s - 1].is_zero() {
                                    term = BigUint::zero();
                                    break;
                                }
                                term *= cur[s - 1].pow(e as u32);
                            }
                        }
                        total += term;
                    }
                    total
                })
                .collect();
            cur = next;
            out.push(cur.clone());
        }
        out
    }
}

impl fmt::Display for Snre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, eq) in self.equations.iter().enumerate() {
            writeln!(f, "x{};n = {eq}   (x{};1 = {})", i + 1, i + 1, eq.items())?;
        }
        Ok(())
    }
}

/// Result of [`Snre::classify_symbols`]: the three sets partition the
/// alphabet, and the fixpoint is reached in at most `k` rounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolClassification {
    pub essential: BTreeSet<Symbol>,
    pub inessential: BTreeSet<Symbol>,
    pub dead: BTreeSet<Symbol>,
    pub steps_used: usize,
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::sft::{Alphabet, ForbiddenSet, Transition};
    use num_traits::One;

    pub(crate) fn gms_basic_22() -> BasicSet {
        let f = ForbiddenSet::new(2, [Transition { from: 2, generator: None, to: 2 }]).unwrap();
        BasicSet::from_forbidden(&f, Alphabet::new(2).unwrap()).unwrap()
    }

    /// Hand-rolled (2,2) system from indicator vectors over (x1², x1x2, x2²).
    pub(crate) fn snre_22(va: [u64; 3], vb: [u64; 3]) -> Snre {
        let monos = canonical_monomials(2, 2);
        let eq = |owner: Symbol, v: [u64; 3]| {
            let terms = monos
                .iter()
                .cloned()
                .zip(v)
                .filter(|(_, c)| *c > 0);
            SnreEquation::new(owner, 2, 2, terms).unwrap()
        };
        Snre::new(2, 2, vec![eq(1, va), eq(2, vb)]).unwrap()
    }

    #[test]
    fn build_gms_snre() {
        let f = Snre::from_basic(&gms_basic_22());
        assert_eq!(f.initial(1), 4);
        assert_eq!(f.initial(2), 1);
        assert_eq!(f.equation(1).indicator_vector().coefficients(), &[1, 2, 1]);
        assert_eq!(f.equation(2).indicator_vector().coefficients(), &[1, 0, 0]);
    }

    #[test]
    fn build_full_shift_snre() {
        let f = Snre::from_basic(&BasicSet::full_shift(2, 2).unwrap());
        for s in 1..=2 {
            assert_eq!(f.initial(s), 4);
            assert_eq!(f.equation(s).indicator_vector().coefficients(), &[1, 2, 1]);
        }
    }

    #[test]
    fn build_with_empty_block() {
        let blocks = vec![
            [vec![1, 1]].into_iter().collect(),
            BTreeSet::new(),
        ];
        let b = BasicSet::new(2, 2, blocks).unwrap();
        let f = Snre::from_basic(&b);
        assert!(f.equation(2).is_empty());
        assert_eq!(f.initial(2), 0);
        assert_eq!(f.equation(2).indicator_vector().coefficients(), &[0, 0, 0]);
    }

    #[test]
    fn item_counts_preserved() {
        let b = gms_basic_22();
        let f = Snre::from_basic(&b);
        let blocks: u64 = (1..=2).map(|s| b.block(s).len() as u64).sum();
        let items: u64 = f.equations().map(|eq| eq.items()).sum();
        assert_eq!(blocks, items);
    }

    #[test]
    fn indicator_canonical_order() {
        let monos = canonical_monomials(2, 2);
        assert_eq!(monos[0].exponents(), &[2, 0]);
        assert_eq!(monos[1].exponents(), &[1, 1]);
        assert_eq!(monos[2].exponents(), &[0, 2]);
        assert_eq!(canonical_monomials(2, 3).len(), 6);
        assert_eq!(canonical_monomials(3, 2).len(), 4);
    }

    #[test]
    fn induces_and_connects() {
        let f = Snre::from_basic(&gms_basic_22());
        assert!(f.induces(2, 1).unwrap());
        assert!(!f.induces(2, 2).unwrap());
        assert!(f.connects(2, 2).unwrap()); // 2 -> 1 -> 2

        let single = Snre::from_basic(&BasicSet::full_shift(2, 1).unwrap());
        assert!(single.connects(1, 1).unwrap());

        // x1 = x1², x2 = x1²: nothing reaches 2
        let g = snre_22([1, 0, 0], [1, 0, 0]);
        assert!(!g.connects(1, 2).unwrap());
        assert!(g.connects(1, 1).unwrap()); // self-loop via x1²
    }

    #[test]
    fn comparability_components_examples() {
        // the golden-mean system: 1 ⇄ 2, a single component
        let f = Snre::from_basic(&gms_basic_22());
        assert_eq!(f.comparability_components(), vec![[1, 2].into_iter().collect()]);

        // x1 = x1², x2 = x1²: 2 reaches 1 but not conversely — still one
        // chain, since a pair only needs one direction
        let g = snre_22([1, 0, 0], [1, 0, 0]);
        assert_eq!(g.comparability_components(), vec![[1, 2].into_iter().collect()]);

        // three symbols where 1 and 2 both feed on 3 but ignore each other:
        // {1, 3} and {2} (or {2, 3} and {1}) are valid chain covers
        let monos3 = |exps: [u8; 3]| Monomial::new(exps.to_vec(), 2).unwrap();
        let eq = |owner: Symbol, m: Monomial| SnreEquation::new(owner, 2, 3, [(m, 1)]).unwrap();
        let h = Snre::new(
            2,
            3,
            vec![
                eq(1, monos3([0, 0, 2])),
                eq(2, monos3([0, 0, 2])),
                eq(3, monos3([0, 0, 2])),
            ],
        )
        .unwrap();
        let chains = h.comparability_components();
        assert_eq!(chains.len(), 2);
        assert_eq!(chains.iter().map(BTreeSet::len).sum::<usize>(), 3);
        for chain in &chains {
            for &a in chain {
                for &b in chain {
                    if a != b {
                        assert!(h.connects(a, b).unwrap() || h.connects(b, a).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn classify_both_essential() {
        // x1 = 2·x1x2, x2 = x1²: initials (2, 1); 2 joins through 2 -> 1.
        let f = snre_22([0, 2, 0], [1, 0, 0]);
        let c = f.classify_symbols();
        assert_eq!(c.essential, [1, 2].into_iter().collect());
        assert!(c.inessential.is_empty());
        assert!(c.dead.is_empty());
        assert!(c.steps_used <= 2);
    }

    #[test]
    fn classify_inessential() {
        // x1 = x1² + 2·x1x2, x2 = x2²: symbol 2 stays at count 1 forever.
        let f = snre_22([1, 2, 0], [0, 0, 1]);
        let c = f.classify_symbols();
        assert_eq!(c.essential, [1].into_iter().collect());
        assert_eq!(c.inessential, [2].into_iter().collect());

        let counts = f.exact_counts(20);
        assert!(counts.iter().all(|row| row[1] == BigUint::one()));
    }

    #[test]
    fn classify_full_shift_one_step() {
        let f = Snre::from_basic(&BasicSet::full_shift(2, 2).unwrap());
        let c = f.classify_symbols();
        assert_eq!(c.essential.len(), 2);
        assert_eq!(c.steps_used, 1);
    }

    #[test]
    fn classify_dead_cascade() {
        // x1 = x2², x2 = (empty): both die.
        let blocks = vec![
            [vec![2, 2]].into_iter().collect(),
            BTreeSet::new(),
        ];
        let f = Snre::from_basic(&BasicSet::new(2, 2, blocks).unwrap());
        let c = f.classify_symbols();
        assert_eq!(c.dead, [1, 2].into_iter().collect());
        assert!(c.essential.is_empty());
        let counts = f.exact_counts(3);
        assert!(counts[1][0].is_zero());
    }

    #[test]
    fn exact_counts_gms() {
        let f = Snre::from_basic(&gms_basic_22());
        let counts = f.exact_counts(3);
        assert_eq!(counts[0], vec![BigUint::from(4u32), BigUint::from(1u32)]);
        assert_eq!(counts[1], vec![BigUint::from(25u32), BigUint::from(16u32)]);
        assert_eq!(counts[2], vec![BigUint::from(1681u32), BigUint::from(625u32)]);
    }
}
