//! Alphabets, forbidden transitions, admissible 2-blocks and transition
//! matrices for nearest-neighbour shifts on the rooted `d`-ary tree, plus
//! exact ball sizes for the free semigroup and the free group.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Symbols are 1-based: `1..=k`.
pub type Symbol = usize;

/// The symbol set `{1, …, k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabet {
    k: usize,
}

impl Alphabet {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Validation("alphabet needs at least one symbol".into()));
        }
        Ok(Self { k })
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        1..=self.k
    }

    pub fn contains(&self, s: Symbol) -> bool {
        (1..=self.k).contains(&s)
    }
}

/// A forbidden transition `(from, generator, to)`. `generator = None` is the
/// homogeneous wildcard: the transition is forbidden in every direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transition {
    pub from: Symbol,
    pub generator: Option<usize>,
    pub to: Symbol,
}

/// A finite set of forbidden transitions over `d` generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenSet {
    d: usize,
    triples: BTreeSet<Transition>,
}

impl ForbiddenSet {
    pub fn new<I>(d: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = Transition>,
    {
        if d == 0 {
            return Err(Error::Validation("generator count d must be at least 1".into()));
        }
        let triples: BTreeSet<Transition> = triples.into_iter().collect();
        for t in &triples {
            if let Some(g) = t.generator {
                if g == 0 || g > d {
                    return Err(Error::Validation(format!(
                        "generator index {g} out of range 1..={d}"
                    )));
                }
            }
        }
        Ok(Self { d, triples })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// True when every stored triple applies to all generators.
    pub fn is_hom(&self) -> bool {
        self.triples.iter().all(|t| t.generator.is_none())
    }

    pub fn triples(&self) -> impl Iterator<Item = &Transition> {
        self.triples.iter()
    }

    fn forbids(&self, from: Symbol, generator: usize, to: Symbol) -> bool {
        self.triples.contains(&Transition { from, generator: Some(generator), to })
            || self.triples.contains(&Transition { from, generator: None, to })
    }
}

/// Per-root-symbol admissible 2-blocks: `blocks[i-1]` is the set of child
/// tuples `(i_1, …, i_d)` allowed below a node coloured `i`. A block set may
/// be empty; the symbol is then dead from height 1 on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicSet {
    d: usize,
    k: usize,
    blocks: Vec<BTreeSet<Vec<Symbol>>>,
}

impl BasicSet {
    pub fn new(d: usize, k: usize, blocks: Vec<BTreeSet<Vec<Symbol>>>) -> Result<Self> {
        if d == 0 || k == 0 {
            return Err(Error::Validation("basic set needs d >= 1 and k >= 1".into()));
        }
        if blocks.len() != k {
            return Err(Error::Validation(format!(
                "expected {k} block sets, got {}",
                blocks.len()
            )));
        }
        for (i, set) in blocks.iter().enumerate() {
            for tuple in set {
                if tuple.len() != d {
                    return Err(Error::Validation(format!(
                        "block for symbol {} has arity {}, expected {d}",
                        i + 1,
                        tuple.len()
                    )));
                }
                if let Some(&s) = tuple.iter().find(|&&s| s == 0 || s > k) {
                    return Err(Error::Validation(format!("symbol {s} out of range 1..={k}")));
                }
            }
        }
        Ok(Self { d, k, blocks })
    }

    /// The unconstrained shift: every tuple admissible for every root symbol.
    pub fn full_shift(d: usize, k: usize) -> Result<Self> {
        let all: BTreeSet<Vec<Symbol>> = all_tuples(d, k).collect();
        Self::new(d, k, vec![all; k])
    }

    /// Basic set induced by a forbidden-transition set:
    /// `(i, i_1, …, i_d)` is admissible iff no `(i, s_j, i_j)` is forbidden.
    pub fn from_forbidden(f: &ForbiddenSet, alphabet: Alphabet) -> Result<Self> {
        let k = alphabet.len();
        for t in f.triples() {
            if !alphabet.contains(t.from) || !alphabet.contains(t.to) {
                return Err(Error::Validation(format!(
                    "transition ({}, {:?}, {}) uses a symbol outside 1..={k}",
                    t.from, t.generator, t.to
                )));
            }
        }
        let d = f.d();
        let blocks = (1..=k)
            .map(|root| {
                all_tuples(d, k)
                    .filter(|tuple| {
                        tuple
                            .iter()
                            .enumerate()
                            .all(|(j, &child)| !f.forbids(root, j + 1, child))
                    })
                    .collect()
            })
            .collect();
        Self::new(d, k, blocks)
    }

    /// Basic set of a vertex shift: `(i, i_1, …, i_d)` admissible iff
    /// `A_j(i, i_j) = 1` for every generator `j`.
    pub fn from_matrices(m: &TransitionMatrices) -> Result<Self> {
        let (d, k) = (m.d(), m.k());
        let blocks = (1..=k)
            .map(|root| {
                all_tuples(d, k)
                    .filter(|tuple| {
                        tuple
                            .iter()
                            .enumerate()
                            .all(|(j, &child)| m.allows(j + 1, root, child))
                    })
                    .collect()
            })
            .collect();
        Self::new(d, k, blocks)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn block(&self, root: Symbol) -> &BTreeSet<Vec<Symbol>> {
        &self.blocks[root - 1]
    }

    pub fn contains(&self, root: Symbol, tuple: &[Symbol]) -> bool {
        self.blocks[root - 1].contains(tuple)
    }

    /// A basic set is representable by per-generator transition matrices iff
    /// every `B^(i)` is a full Cartesian product of per-position symbol sets.
    pub fn is_matrix_representable(&self) -> bool {
        (1..=self.k).all(|root| {
            let block = self.block(root);
            let per_pos = self.per_position_sets(root);
            let product_size: usize = per_pos.iter().map(BTreeSet::len).product();
            block.len() == product_size
        })
    }

    fn per_position_sets(&self, root: Symbol) -> Vec<BTreeSet<Symbol>> {
        let mut per_pos = vec![BTreeSet::new(); self.d];
        for tuple in self.block(root) {
            for (j, &s) in tuple.iter().enumerate() {
                per_pos[j].insert(s);
            }
        }
        per_pos
    }

    /// Inverse of [`BasicSet::from_matrices`]; fails on basic sets that are
    /// not Cartesian products.
    pub fn to_matrices(&self) -> Result<TransitionMatrices> {
        if !self.is_matrix_representable() {
            return Err(Error::Unsupported(
                "basic set is not a product of per-generator allowed sets".into(),
            ));
        }
        let mut mats = vec![vec![vec![false; self.k]; self.k]; self.d];
        for root in 1..=self.k {
            for (j, set) in self.per_position_sets(root).into_iter().enumerate() {
                for s in set {
                    mats[j][root - 1][s - 1] = true;
                }
            }
        }
        TransitionMatrices::new(mats)
    }
}

fn all_tuples(d: usize, k: usize) -> impl Iterator<Item = Vec<Symbol>> {
    let total = (k as u128).checked_pow(d as u32).expect("tuple space too large");
    (0..total).map(move |mut idx| {
        let mut tuple = vec![0; d];
        for slot in tuple.iter_mut().rev() {
            *slot = (idx % k as u128) as usize + 1;
            idx /= k as u128;
        }
        tuple
    })
}

/// One binary `k × k` matrix per generator; `mats[j][a-1][b-1]` says whether
/// the transition `a -> b` is allowed in direction `j + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrices {
    mats: Vec<Vec<Vec<bool>>>,
}

impl TransitionMatrices {
    pub fn new(mats: Vec<Vec<Vec<bool>>>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::Validation("need at least one generator matrix".into()));
        }
        let k = mats[0].len();
        if k == 0 {
            return Err(Error::Validation("matrices must be non-empty".into()));
        }
        for m in &mats {
            if m.len() != k || m.iter().any(|row| row.len() != k) {
                return Err(Error::Validation("matrices must be square and same size".into()));
            }
        }
        Ok(Self { mats })
    }

    /// Hom-shift constructor: the same matrix in every direction.
    pub fn hom(d: usize, matrix: Vec<Vec<bool>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Validation("generator count d must be at least 1".into()));
        }
        Self::new(vec![matrix; d])
    }

    pub fn d(&self) -> usize {
        self.mats.len()
    }

    pub fn k(&self) -> usize {
        self.mats[0].len()
    }

    pub fn allows(&self, generator: usize, from: Symbol, to: Symbol) -> bool {
        self.mats[generator - 1][from - 1][to - 1]
    }

    /// A vertex shift is a hom-shift iff all generator matrices coincide.
    pub fn is_hom(&self) -> bool {
        self.mats.windows(2).all(|w| w[0] == w[1])
    }
}

/// `|E_n| = 1 + d + … + d^n`, exactly, in 128-bit integers.
pub fn ball_size(d: usize, n: usize) -> Result<u128> {
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for j in 0..=n {
        total = total.checked_add(power).ok_or(Error::BallOverflow { d, n })?;
        if j < n {
            power = power.checked_mul(d as u128).ok_or(Error::BallOverflow { d, n })?;
        }
    }
    Ok(total)
}

/// `|G_n|` for the free group on `d` generators: `1 + 2d·|E_{n-1}|`, where the
/// inner ball lives on the free semigroup with `q = 2d - 1` generators.
pub fn free_group_ball_size(d: usize, n: usize) -> Result<u128> {
    if d == 0 {
        return Err(Error::Validation("free group rank must be at least 1".into()));
    }
    if n == 0 {
        return Ok(1);
    }
    let q = 2 * d - 1;
    let inner = ball_size(q, n - 1)?;
    (2 * d as u128)
        .checked_mul(inner)
        .and_then(|x| x.checked_add(1))
        .ok_or(Error::BallOverflow { d, n })
}

/// Ball sizes for a fixed branching, bundling the two flavours above.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallSize {
    d: usize,
}

impl BallSize {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Validation("branching must be at least 1".into()));
        }
        Ok(Self { d })
    }

    /// `|E_n|` on the free semigroup with `d` generators.
    pub fn semigroup(&self, n: usize) -> Result<u128> {
        ball_size(self.d, n)
    }

    /// `|G_n|` on the free group with `d` generators.
    pub fn free_group(&self, n: usize) -> Result<u128> {
        free_group_ball_size(self.d, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gms_forbidden() -> ForbiddenSet {
        ForbiddenSet::new(2, [Transition { from: 2, generator: None, to: 2 }]).unwrap()
    }

    #[test]
    fn forbidden_to_basic_gms() {
        let b = BasicSet::from_forbidden(&gms_forbidden(), Alphabet::new(2).unwrap()).unwrap();
        let b1: Vec<Vec<usize>> = b.block(1).iter().cloned().collect();
        assert_eq!(b1, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
        let b2: Vec<Vec<usize>> = b.block(2).iter().cloned().collect();
        assert_eq!(b2, vec![vec![1, 1]]);
    }

    #[test]
    fn forbidden_to_basic_empty_is_full_shift() {
        let f = ForbiddenSet::new(2, []).unwrap();
        let b = BasicSet::from_forbidden(&f, Alphabet::new(2).unwrap()).unwrap();
        assert_eq!(b, BasicSet::full_shift(2, 2).unwrap());
        assert_eq!(b.block(1).len(), 4);
        assert_eq!(b.block(2).len(), 4);
    }

    #[test]
    fn forbidden_to_basic_everything_forbidden() {
        let mut triples = Vec::new();
        for a in 1..=2 {
            for g in 1..=2 {
                for b in 1..=2 {
                    triples.push(Transition { from: a, generator: Some(g), to: b });
                }
            }
        }
        let f = ForbiddenSet::new(2, triples).unwrap();
        let b = BasicSet::from_forbidden(&f, Alphabet::new(2).unwrap()).unwrap();
        assert!(b.block(1).is_empty());
        assert!(b.block(2).is_empty());
    }

    #[test]
    fn forbidden_rejects_out_of_range() {
        let f = ForbiddenSet::new(2, [Transition { from: 3, generator: None, to: 1 }]).unwrap();
        assert!(BasicSet::from_forbidden(&f, Alphabet::new(2).unwrap()).is_err());
        assert!(ForbiddenSet::new(2, [Transition { from: 1, generator: Some(3), to: 1 }]).is_err());
    }

    #[test]
    fn matrices_to_basic_gms() {
        let m = TransitionMatrices::hom(2, vec![vec![true, true], vec![true, false]]).unwrap();
        let b = BasicSet::from_matrices(&m).unwrap();
        let expected =
            BasicSet::from_forbidden(&gms_forbidden(), Alphabet::new(2).unwrap()).unwrap();
        assert_eq!(b, expected);
        assert!(m.is_hom());
    }

    #[test]
    fn matrices_all_ones_and_zero() {
        let ones = TransitionMatrices::hom(2, vec![vec![true, true], vec![true, true]]).unwrap();
        assert_eq!(BasicSet::from_matrices(&ones).unwrap(), BasicSet::full_shift(2, 2).unwrap());

        let mats = vec![
            vec![vec![true, true], vec![true, true]],
            vec![vec![false, false], vec![false, false]],
        ];
        let zero = TransitionMatrices::new(mats).unwrap();
        let b = BasicSet::from_matrices(&zero).unwrap();
        assert!(b.block(1).is_empty());
        assert!(b.block(2).is_empty());
        assert!(!zero.is_hom());
    }

    #[test]
    fn matrix_round_trip() {
        let m = TransitionMatrices::hom(2, vec![vec![true, true], vec![true, false]]).unwrap();
        let b = BasicSet::from_matrices(&m).unwrap();
        assert!(b.is_matrix_representable());
        let m2 = b.to_matrices().unwrap();
        assert_eq!(BasicSet::from_matrices(&m2).unwrap(), b);
    }

    #[test]
    fn non_product_basic_set_not_representable() {
        // {(1,1),(2,2)} admits both symbols in each slot but is not a product.
        let blocks = vec![
            [vec![1, 1], vec![2, 2]].into_iter().collect(),
            [vec![1, 1]].into_iter().collect(),
        ];
        let b = BasicSet::new(2, 2, blocks).unwrap();
        assert!(!b.is_matrix_representable());
        assert!(b.to_matrices().is_err());
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball_size(2, 3).unwrap(), 15);
        assert_eq!(ball_size(1, 5).unwrap(), 6);
        assert_eq!(ball_size(2, 0).unwrap(), 1);
        // free-group ball at d = 2: |G_2| = 1 + 4·|E_1| over S_3 = 1 + 4·4 = 17
        assert_eq!(free_group_ball_size(2, 2).unwrap(), 17);
        assert_eq!(free_group_ball_size(2, 0).unwrap(), 1);
        assert!(ball_size(2, 200).is_err());
    }

    #[test]
    fn ball_size_bundle() {
        let ball = BallSize::new(2).unwrap();
        assert_eq!(ball.semigroup(3).unwrap(), 15);
        assert_eq!(ball.free_group(2).unwrap(), 17);
        assert!(BallSize::new(0).is_err());
    }

    #[test]
    fn ball_size_recurrence() {
        for d in 1..=4 {
            for n in 1..=20 {
                let big = ball_size(d, n).unwrap();
                let small = ball_size(d, n - 1).unwrap();
                assert_eq!(big - d as u128 * small, 1);
            }
        }
    }
}
