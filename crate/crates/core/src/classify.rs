//! Growth-type classification of two-symbol systems.
//!
//! At `(d, k) = (2, 2)` every system built from a basic set falls into at
//! least one of four classes: equal growth (both counts identical forever),
//! dominating (one count stays on top), cooperating (the total count squares
//! up to a controlled remainder), and oscillating (the lead alternates). The
//! exact classifier walks the exhaustive case split over item counts and
//! indicator shapes; an independent empirical detector watches an actual
//! trajectory and is the only route offered for larger alphabets.

use std::collections::BTreeSet;
use std::fmt;

use crate::entropy::LogState;
use crate::error::{Error, Result};
use crate::snre::Snre;

/// The four growth classes, ordered by reporting precedence
/// (most specific first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SnreType {
    EqualGrowth,
    Oscillating,
    Cooperating,
    Dominating,
}

impl SnreType {
    pub fn as_letter(&self) -> &'static str {
        match self {
            SnreType::EqualGrowth => "E",
            SnreType::Dominating => "D",
            SnreType::Cooperating => "C",
            SnreType::Oscillating => "O",
        }
    }
}

impl fmt::Display for SnreType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_letter())
    }
}

/// Where a label came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    TheoremCase,
    Empirical,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::TheoremCase => "theorem-case",
            Provenance::Empirical => "empirical",
        }
    }
}

/// A set of applicable classes with one primary representative. An empty
/// set (possible only for the empirical detector) means "undecided".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeLabel {
    applicable: BTreeSet<SnreType>,
    primary: Option<SnreType>,
    provenance: Provenance,
}

impl TypeLabel {
    fn from_applicable(applicable: BTreeSet<SnreType>, provenance: Provenance) -> Self {
        // BTreeSet order is the precedence order E > O > C > D
        let primary = applicable.iter().next().copied();
        Self { applicable, primary, provenance }
    }

    pub fn applicable(&self) -> &BTreeSet<SnreType> {
        &self.applicable
    }

    pub fn primary(&self) -> Option<SnreType> {
        self.primary
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_undecided(&self) -> bool {
        self.applicable.is_empty()
    }

    pub fn contains(&self, t: SnreType) -> bool {
        self.applicable.contains(&t)
    }

    /// True when the two labels could describe the same system: either may
    /// be undecided, and otherwise they must share at least one class.
    pub fn compatible_with(&self, other: &TypeLabel) -> bool {
        self.is_undecided()
            || other.is_undecided()
            || self.applicable.intersection(&other.applicable).next().is_some()
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.applicable.is_empty() {
            return write!(f, "undecided");
        }
        write!(f, "{{")?;
        for (i, t) in self.applicable.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}")
    }
}

/// Equal growth holds exactly when all height-1 counts coincide (and are
/// positive): every item then evaluates to the same `d`-th power, so the
/// counts stay equal by induction.
pub fn is_equal_growth(f: &Snre) -> bool {
    let initials = f.initials();
    initials[0] > 0 && initials.iter().all(|&v| v == initials[0])
}

/// Exact classification at `(d, k) = (2, 2)` by the exhaustive case split
/// over `(|F^(a)|, |F^(b)|)` and the indicator shapes. Multi-membership is
/// recorded where it is established (the two-symbol golden-mean shape is
/// both cooperating and dominating); the primary label follows the
/// precedence E > O > C > D.
pub fn classify_type_22(f: &Snre) -> Result<TypeLabel> {
    if f.d() != 2 || f.k() != 2 {
        return Err(Error::Unsupported(
            "exact classification covers (d, k) = (2, 2); use the empirical detector".into(),
        ));
    }
    let (ia, ib) = (f.initial(1), f.initial(2));
    if ia == 0 || ib == 0 {
        let s = if ia == 0 { 1 } else { 2 };
        return Err(Error::DeadSymbol { symbol: s, context: "type classification" });
    }
    if ia == ib {
        // equal growth; dominance holds with equality
        return Ok(TypeLabel::from_applicable(
            [SnreType::EqualGrowth, SnreType::Dominating].into(),
            Provenance::TheoremCase,
        ));
    }
    // Normalize so the first slot has the larger item count. Relabeling the
    // two symbols reverses the monomial basis (x1², x1x2, x2²), so the
    // indicator vectors flip end to end.
    let (hi, lo) = if ia > ib { (1, 2) } else { (2, 1) };
    let mut va: Vec<u64> = f.equation(hi).indicator_vector().coefficients().to_vec();
    let mut vb: Vec<u64> = f.equation(lo).indicator_vector().coefficients().to_vec();
    if hi == 2 {
        va.reverse();
        vb.reverse();
    }
    let items = f.initial(hi);

    let set: BTreeSet<SnreType> = match items {
        4 => {
            if vb == [1, 0, 0] {
                // golden-mean shape: cooperating and dominating
                [SnreType::Cooperating, SnreType::Dominating].into()
            } else {
                [SnreType::Dominating].into()
            }
        }
        3 => {
            let cooperating = matches!(
                (va.as_slice(), vb.as_slice()),
                ([0, 2, 1], [1, 0, 0]) // x·y-led over x², total squares exactly
                    | ([0, 2, 1], [1, 1, 0])
                    | ([1, 2, 0], [0, 1, 1])
            );
            if cooperating {
                [SnreType::Cooperating].into()
            } else {
                [SnreType::Dominating].into()
            }
        }
        2 => {
            if va == [0, 1, 1] && vb == [1, 0, 0] {
                [SnreType::Oscillating].into()
            } else {
                [SnreType::Dominating].into()
            }
        }
        _ => unreachable!("items > |F^(b)| >= 1 forces 2..=4"),
    };
    Ok(TypeLabel::from_applicable(set, Provenance::TheoremCase))
}

/// Per-step ratio of the two counts (log domain) with the detected pattern.
#[derive(Debug, Clone)]
pub struct RatioTrace {
    log_ratios: Vec<f64>,
    pattern: RatioPattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioPattern {
    ConstantSide,
    Alternating,
    Undecided,
}

impl RatioTrace {
    /// `ln(γ_{1;n} / γ_{2;n})` for two-symbol systems; for larger alphabets
    /// the spread `ln(max) - ln(min)` is recorded instead.
    pub fn log_ratios(&self) -> &[f64] {
        &self.log_ratios
    }

    pub fn ratios(&self) -> impl Iterator<Item = f64> + '_ {
        self.log_ratios.iter().map(|x| x.exp())
    }

    pub fn pattern(&self) -> RatioPattern {
        self.pattern
    }
}

/// Numerical cross-check of the classifier: iterate the log recursion and
/// look for each class's defining behaviour. May return several classes, or
/// none ("undecided"); never contradicts the exact classifier. Requires at
/// least 8 steps and a system without dead symbols.
pub fn detect_empirically(f: &Snre, steps: usize) -> Result<(TypeLabel, RatioTrace)> {
    if steps < 8 {
        return Err(Error::Validation("empirical detection needs at least 8 steps".into()));
    }
    if let Some(s) = (1..=f.k()).find(|&s| f.initial(s) == 0) {
        return Err(Error::DeadSymbol { symbol: s, context: "empirical detection" });
    }
    let k = f.k();
    let burn_in = 2;
    let mut state = LogState::initial(f);
    let mut offsets: Vec<Vec<f64>> = vec![state.offsets().to_vec()];
    let mut c_ok = k == 2 && f.d() == 2;
    for _ in 1..steps {
        let (next, info) = crate::entropy::step(f, &state);
        if next.all_dead() || (1..=k).any(|s| !next.is_alive(s)) {
            return Err(Error::DeadSymbol { symbol: 0, context: "empirical detection" });
        }
        if c_ok {
            // ln c_{n+1} - 2 ln c_n = u_{n+1} + LT_{n+1} - 2 LT_n ∈ [0, ln 2]
            let t = info.u + next.total_offset() - 2.0 * state.total_offset();
            if !(-1e-9..=std::f64::consts::LN_2 + 1e-9).contains(&t) {
                c_ok = false;
            }
        }
        state = next;
        offsets.push(state.offsets().to_vec());
    }

    let mut applicable = BTreeSet::new();
    // equal growth: all offsets coincide at every step
    if offsets.iter().all(|row| row.iter().all(|&d| d.abs() < 1e-12)) {
        applicable.insert(SnreType::EqualGrowth);
    }
    // dominance: some symbol sits at the top (ties allowed) at every step
    // past burn-in
    let post = &offsets[burn_in.min(offsets.len() - 1)..];
    let dominated = (0..k).any(|s| post.iter().all(|row| row[s] >= -1e-12));
    if dominated {
        applicable.insert(SnreType::Dominating);
    } else {
        // oscillation: no symbol stays on top, and the strict leader
        // alternates with at least 3 changes
        let leaders: Vec<Option<usize>> = post
            .iter()
            .map(|row| {
                let top = row
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .unwrap();
                let strict = row
                    .iter()
                    .enumerate()
                    .all(|(i, &v)| i == top.0 || v < top.1 - 1e-12);
                strict.then_some(top.0)
            })
            .collect();
        let strict: Vec<usize> = leaders.iter().flatten().copied().collect();
        let changes = strict.windows(2).filter(|w| w[0] != w[1]).count();
        if changes >= 3 && strict.windows(2).all(|w| w[0] != w[1]) {
            applicable.insert(SnreType::Oscillating);
        }
    }
    if c_ok {
        applicable.insert(SnreType::Cooperating);
    }

    let log_ratios: Vec<f64> = if k == 2 {
        offsets.iter().map(|row| row[0] - row[1]).collect()
    } else {
        offsets
            .iter()
            .map(|row| {
                let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let min = row.iter().cloned().fold(f64::INFINITY, f64::min);
                max - min
            })
            .collect()
    };
    let pattern = if applicable.contains(&SnreType::Oscillating) {
        RatioPattern::Alternating
    } else if applicable.contains(&SnreType::Dominating) {
        RatioPattern::ConstantSide
    } else {
        RatioPattern::Undecided
    };
    Ok((
        TypeLabel::from_applicable(applicable, Provenance::Empirical),
        RatioTrace { log_ratios, pattern },
    ))
}
