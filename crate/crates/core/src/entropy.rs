//! Entropy of a recursive count system: the limit of `ln(total count) / |E_n|`.
//!
//! The generic engine iterates the recursion in a normalized log domain and
//! certifies the limit with a two-sided sandwich. Writing `M_n` for the
//! largest log-count at height `n` and `R_{i;n} = γ_{i;n} / γ_{i;n-1}` for
//! the one-step count ratios, a block of height `n + j` splits into a
//! height-`j` top and height-`n` bottoms at its `d^j` leaves, which gives
//!
//! ```text
//! ln ρ_n / d^n  ≤  h  ≤  min( ln P_n / d^n,  (d-1)·M_n/d^{n+1} + ln k / d^n )
//! ```
//!
//! with `ρ_n, P_n` the extreme live ratios, plus the pure-power lower bound
//! `h ≥ (d-1)·ln γ_{i;n} / d^{n+1}` for any live symbol whose equation
//! contains its own `d`-th power. The intersection over steps shrinks
//! geometrically; iteration stops once its half-width is below tolerance.
//!
//! Closed-form routes for the two-symbol types (equal growth, dominating,
//! cooperating, oscillating) accumulate the corresponding series with
//! certified geometric tails and must agree with the generic engine.

use std::fmt;

use crate::classify::{self, SnreType};
use crate::error::{Error, Result};
use crate::snre::{Monomial, Snre};
use crate::sft::Symbol;

/// Normalized log-domain state at height `n`.
///
/// The largest log-count is carried as `s_n = M_n / d^n`; every symbol keeps
/// its non-positive offset `δ_i = ln γ_{i;n} - M_n` (`-∞` marks a dead
/// symbol). While any symbol is alive, `max_i δ_i = 0`.
#[derive(Debug, Clone)]
pub struct LogState {
    n: usize,
    s: f64,
    delta: Vec<f64>,
}

impl LogState {
    /// State at height 1: counts are the item counts of the equations.
    pub fn initial(f: &Snre) -> Self {
        let logs: Vec<f64> = f
            .initials()
            .iter()
            .map(|&v| if v == 0 { f64::NEG_INFINITY } else { (v as f64).ln() })
            .collect();
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return Self { n: 1, s: 0.0, delta: vec![f64::NEG_INFINITY; f.k()] };
        }
        let delta = logs.iter().map(|&x| x - m).collect();
        Self { n: 1, s: m / f.d() as f64, delta }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `M_n / d^n`, the normalized magnitude.
    pub fn normalized_magnitude(&self) -> f64 {
        self.s
    }

    pub fn is_alive(&self, s: Symbol) -> bool {
        self.delta[s - 1] > f64::NEG_INFINITY
    }

    pub fn all_dead(&self) -> bool {
        self.delta.iter().all(|&d| d == f64::NEG_INFINITY)
    }

    pub fn offset(&self, s: Symbol) -> f64 {
        self.delta[s - 1]
    }

    /// `ln γ_{s;n}`, or `None` for a dead symbol. Materializes `M_n = s·d^n`,
    /// so it is only meaningful while `d^n` is representable.
    pub fn log_count(&self, s: Symbol, d: usize) -> Option<f64> {
        if !self.is_alive(s) {
            return None;
        }
        Some(self.s * (d as f64).powi(self.n as i32) + self.delta[s - 1])
    }

    /// All offsets at once, in symbol order.
    pub fn offsets(&self) -> &[f64] {
        &self.delta
    }

    /// `ln Σ_i γ_{i;n} - M_n`, the log of the total count relative to the max.
    pub(crate) fn total_offset(&self) -> f64 {
        stable_log_sum(self.delta.iter().copied())
    }
}

/// Per-step data the series accumulators feed on.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StepInfo {
    /// `u_n = M_n - d·M_{n-1}`, the bounded magnitude increment.
    pub(crate) u: f64,
}

fn stable_log_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let terms: Vec<f64> = terms.into_iter().filter(|t| *t > f64::NEG_INFINITY).collect();
    if terms.is_empty() {
        return f64::NEG_INFINITY;
    }
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// Log-domain value of `F^(i)` at the offsets: `ln Σ_m c_m · e^{⟨e_m, δ⟩}`.
/// Monomials touching a dead symbol contribute nothing.
fn equation_offset_value(f: &Snre, i: Symbol, delta: &[f64]) -> f64 {
    let terms = f.equation(i).terms().map(|(m, c)| {
        let mut t = (c as f64).ln();
        for s in m.support() {
            let e = m.exponent_of(s) as f64;
            if delta[s - 1] == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            t += e * delta[s - 1];
        }
        t
    });
    stable_log_sum(terms)
}

/// One step of the recursion in the normalized log domain.
pub fn iterate_log(f: &Snre, state: &LogState) -> LogState {
    step(f, state).0
}

pub(crate) fn step(f: &Snre, state: &LogState) -> (LogState, StepInfo) {
    let d = f.d() as f64;
    let lse: Vec<f64> = (1..=f.k())
        .map(|i| equation_offset_value(f, i, &state.delta))
        .collect();
    let u = lse.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if u == f64::NEG_INFINITY {
        let dead = LogState {
            n: state.n + 1,
            s: 0.0,
            delta: vec![f64::NEG_INFINITY; f.k()],
        };
        return (dead, StepInfo { u });
    }
    let n = state.n + 1;
    let s = state.s + u / d.powi(n as i32);
    let delta = lse.iter().map(|&x| x - u).collect();
    (LogState { n, s, delta }, StepInfo { u })
}

/// How an [`EntropyResult`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    GenericIteration,
    EqualGrowthClosedForm,
    DominatingSeries,
    CooperatingSeries,
    OscillatingSeries,
    Linear1d,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::GenericIteration => "generic-iteration",
            Method::EqualGrowthClosedForm => "E-closed-form",
            Method::DominatingSeries => "D-series",
            Method::CooperatingSeries => "C-series",
            Method::OscillatingSeries => "O-series",
            Method::Linear1d => "linear-1d",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Output annotations drawn from a closed vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    /// Every symbol died: the shift is empty and `h = 0` by convention.
    Empty,
    /// Some (not all) symbols have count zero eventually.
    DeadSymbols,
    /// One-generator increments averaged over the tail rather than converged.
    CesaroAveraged,
    /// The iterated value contradicts the printed chessboard closed form
    /// `d·ln(k-1)`; the iteration (telescoping gives `ln(k-1)`) is reported.
    CorollaryDiscrepancy,
    /// Construction outside the verified parameter range.
    Experimental,
}

impl Flag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flag::Empty => "empty",
            Flag::DeadSymbols => "dead-symbols",
            Flag::CesaroAveraged => "cesaro-averaged",
            Flag::CorollaryDiscrepancy => "corollary-discrepancy",
            Flag::Experimental => "experimental",
        }
    }
}

/// An entropy value with a certified residual bound and growth metadata.
#[derive(Debug, Clone)]
pub struct EntropyResult {
    pub h: f64,
    /// Certified bound on `|h - h_limit|` (modulo double rounding).
    pub residual: f64,
    pub iterations: usize,
    pub method: Method,
    /// Second-order growth exponent estimate `(ln κ, κ)`.
    pub ln_kappa: f64,
    pub kappa: f64,
    pub flags: Vec<Flag>,
}

impl EntropyResult {
    pub fn is_empty_shift(&self) -> bool {
        self.flags.contains(&Flag::Empty)
    }

    pub fn entropy_bits(&self) -> f64 {
        self.h / std::f64::consts::LN_2
    }

    fn checked(mut self, cap: f64) -> Self {
        // a midpoint estimate may sit up to its own residual outside [0, cap]
        debug_assert!(
            self.h >= -1e-9 - self.residual && self.h <= cap + self.residual + 1e-9,
            "h out of range: {} (cap {cap}, residual {})",
            self.h,
            self.residual
        );
        self.h = self.h.clamp(0.0, cap);
        self.residual = self.residual.max(0.0);
        self
    }
}

/// A-priori entropy bound: counts satisfy `G_n ≤ I·G_{n-1}^d` with `I` the
/// largest item count, so `h ≤ ln(I)/d`. For systems built from basic sets
/// (`I ≤ k^d`) this implies the familiar `h ≤ ln k`.
fn entropy_cap(f: &Snre) -> f64 {
    let items_max = f.initials().into_iter().max().unwrap_or(1).max(1);
    (items_max as f64).ln() / f.d() as f64
}

/// Interval intersection helper for the sandwich certificates.
#[derive(Debug, Clone, Copy)]
struct Bracket {
    lo: f64,
    hi: f64,
}

impl Bracket {
    fn new(cap: f64) -> Self {
        Self { lo: 0.0, hi: cap }
    }

    fn tighten(&mut self, lo: f64, hi: f64) {
        if lo.is_finite() {
            self.lo = self.lo.max(lo);
        }
        if hi.is_finite() {
            self.hi = self.hi.min(hi);
        }
        // float noise can cross the bounds once the interval is tiny
        if self.hi < self.lo {
            let mid = 0.5 * (self.hi + self.lo);
            self.lo = mid;
            self.hi = mid;
        }
    }

    fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

const FLOAT_SLOP: f64 = 1e-14;

/// Which symbols own a pure self-power monomial `x_i^d` (used by the
/// plant-the-same-colour lower bound).
fn pure_power_symbols(f: &Snre) -> Vec<bool> {
    (1..=f.k())
        .map(|i| {
            let mut exps = vec![0u8; f.k()];
            exps[i - 1] = f.d() as u8;
            let m = Monomial::new(exps, f.d()).expect("degree d by construction");
            f.equation(i).terms().any(|(mm, _)| *mm == m)
        })
        .collect()
}

/// Generic entropy via the normalized iteration with sandwich certificates.
///
/// Returns `h = lim ln|B_n| / |E_n|` with a certified residual; an empty
/// shift yields `h = 0` with the [`Flag::Empty`] marker. One-generator
/// systems take the linear path ([`Method::Linear1d`]).
pub fn entropy_generic(f: &Snre, tol: f64, max_iter: usize) -> Result<EntropyResult> {
    if tol <= 0.0 {
        return Err(Error::Validation("tolerance must be positive".into()));
    }
    if f.d() == 1 {
        return entropy_linear_1d(f, tol, max_iter);
    }
    let d = f.d() as f64;
    let k = f.k();
    let cap = entropy_cap(f);
    let ln_items = cap * d;
    let pure = pure_power_symbols(f);

    let mut state = LogState::initial(f);
    if state.all_dead() {
        return Ok(empty_result(1, Method::GenericIteration));
    }
    let mut bracket = Bracket::new(cap);
    let mut deaths_seen = state.delta.iter().filter(|&&x| x == f64::NEG_INFINITY).count();
    let mut settle_from = f.k() + 3;
    let mut trace = MagnitudeTrace::new(f.d());
    trace.push(&state);

    let mut iterations = 1;
    for _ in 1..max_iter {
        let prev = state.clone();
        let (next, info) = step(f, &state);
        state = next;
        iterations = state.n();
        trace.push(&state);

        if state.all_dead() {
            let mut r = empty_result(iterations, Method::GenericIteration);
            r.flags.push(Flag::DeadSymbols);
            return Ok(r);
        }
        let dead_now = state.delta.iter().filter(|&&x| x == f64::NEG_INFINITY).count();
        if dead_now > deaths_seen {
            deaths_seen = dead_now;
            settle_from = state.n() + 2;
        }
        if state.n() < settle_from {
            continue;
        }

        let n = state.n();
        let dn = d.powi(-(n as i32));
        // ln R_i = (M_n - M_{n-1}) + (δ_{i,n} - δ_{i,n-1}); the magnitude
        // difference is (d-1)·M_{n-1} + u_n, kept in normalized form.
        let mut min_dd = f64::INFINITY;
        let mut max_dd = f64::NEG_INFINITY;
        for i in 1..=k {
            if state.is_alive(i) && prev.is_alive(i) {
                let dd = state.offset(i) - prev.offset(i);
                min_dd = min_dd.min(dd);
                max_dd = max_dd.max(dd);
            }
        }
        if !min_dd.is_finite() {
            continue;
        }
        let ratio_base = (d - 1.0) * prev.normalized_magnitude() / d;
        let lo_ratio = ratio_base + (info.u + min_dd) * dn;
        let hi_ratio = ratio_base + (info.u + max_dd) * dn;
        // counting bound: iterating G ≤ I·G^d from step n gives
        // h ≤ (d-1)·M_n/d^{n+1} + ln(I)/d^{n+1}
        let hi_count = ((d - 1.0) * state.normalized_magnitude() + ln_items * dn) / d;
        // pure-power bound: h ≥ (d-1)·(M_n + δ_i)/d^{n+1}
        let mut lo_pure = f64::NEG_INFINITY;
        for i in 1..=k {
            if pure[i - 1] && state.is_alive(i) {
                let a = (d - 1.0) * (state.normalized_magnitude() + state.offset(i) * dn) / d;
                lo_pure = lo_pure.max(a);
            }
        }
        bracket.tighten(lo_ratio.max(lo_pure), hi_ratio.min(hi_count));
        if bracket.width() * 0.5 + FLOAT_SLOP <= tol {
            break;
        }
    }

    let (ln_kappa, kappa) = extended_slope(f, &state, trace);
    let mut flags = Vec::new();
    if deaths_seen > 0 {
        flags.push(Flag::DeadSymbols);
    }
    Ok(EntropyResult {
        h: bracket.mid(),
        residual: bracket.width() * 0.5 + FLOAT_SLOP,
        iterations,
        method: Method::GenericIteration,
        ln_kappa,
        kappa,
        flags,
    }
    .checked(cap))
}

fn empty_result(iterations: usize, method: Method) -> EntropyResult {
    EntropyResult {
        h: 0.0,
        residual: 0.0,
        iterations,
        method,
        ln_kappa: 0.0,
        kappa: 1.0,
        flags: vec![Flag::Empty],
    }
}

/// One-generator systems: counts satisfy a linear recursion, and the
/// increment `M_n - M_{n-1}` converges to the entropy for primitive systems.
/// The same ratio sandwich applies with weights `1` instead of `d^{-n}`;
/// when it refuses to settle, a Cesàro average of the last half of the
/// increments is reported with the observed oscillation width as residual.
fn entropy_linear_1d(f: &Snre, tol: f64, max_iter: usize) -> Result<EntropyResult> {
    let k = f.k();
    let cap = entropy_cap(f);
    let mut state = LogState::initial(f);
    if state.all_dead() {
        return Ok(empty_result(1, Method::Linear1d));
    }
    let mut bracket = Bracket::new(cap);
    let mut increments = Vec::new();
    let mut deaths = state.delta.iter().filter(|&&x| x == f64::NEG_INFINITY).count();
    let mut settle_from = k + 3;
    let mut trace = MagnitudeTrace::new(1);
    trace.push(&state);

    for _ in 1..max_iter {
        let prev = state.clone();
        let (next, info) = step(f, &state);
        state = next;
        trace.push(&state);
        if state.all_dead() {
            let mut r = empty_result(state.n(), Method::Linear1d);
            r.flags.push(Flag::DeadSymbols);
            return Ok(r);
        }
        let dead_now = state.delta.iter().filter(|&&x| x == f64::NEG_INFINITY).count();
        if dead_now > deaths {
            deaths = dead_now;
            settle_from = state.n() + 2;
        }
        increments.push(info.u); // M_n - M_{n-1} for d = 1
        if state.n() < settle_from {
            continue;
        }
        let mut min_r = f64::INFINITY;
        let mut max_r = f64::NEG_INFINITY;
        for i in 1..=k {
            if state.is_alive(i) && prev.is_alive(i) {
                let r = info.u + state.offset(i) - prev.offset(i);
                min_r = min_r.min(r);
                max_r = max_r.max(r);
            }
        }
        if min_r.is_finite() {
            bracket.tighten(min_r.max(0.0), max_r);
        }
        if bracket.width() * 0.5 + FLOAT_SLOP <= tol {
            let (ln_kappa, kappa) = extended_slope(f, &state, trace);
            let mut flags = Vec::new();
            if deaths > 0 {
                flags.push(Flag::DeadSymbols);
            }
            return Ok(EntropyResult {
                h: bracket.mid(),
                residual: bracket.width() * 0.5 + FLOAT_SLOP,
                iterations: state.n(),
                method: Method::Linear1d,
                ln_kappa,
                kappa,
                flags,
            }
            .checked(cap));
        }
    }

    // Cesàro fallback over the last half of the increments.
    let tail = &increments[increments.len() / 2..];
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = hi - lo;
    let quarter = &tail[tail.len() / 2..];
    let quarter_mean = quarter.iter().sum::<f64>() / quarter.len() as f64;
    if !mean.is_finite() || (quarter_mean - mean).abs() > (10.0 * tol).max(1e-9) {
        return Err(Error::Convergence { iterations: state.n(), width });
    }
    let (ln_kappa, kappa) = extended_slope(f, &state, trace);
    let mut flags = vec![Flag::CesaroAveraged];
    if deaths > 0 {
        flags.push(Flag::DeadSymbols);
    }
    Ok(EntropyResult {
        h: mean.clamp(0.0, cap),
        residual: width * 0.5 + FLOAT_SLOP,
        iterations: state.n(),
        method: Method::Linear1d,
        ln_kappa,
        kappa,
        flags,
    }
    .checked(cap))
}

/// Records `ln M_n` against `n` for the second-order growth estimate.
#[derive(Debug, Clone)]
struct MagnitudeTrace {
    d: usize,
    points: Vec<(f64, f64)>, // (n, ln M_n)
}

impl MagnitudeTrace {
    fn new(d: usize) -> Self {
        Self { d, points: Vec::new() }
    }

    fn len(&self) -> usize {
        self.points.len()
    }

    fn push(&mut self, state: &LogState) {
        if state.all_dead() {
            return;
        }
        // M_n = s_n · d^n; compute ln M_n without materializing d^n.
        let s = state.normalized_magnitude();
        if s > 0.0 {
            let ln_m = s.ln() + state.n() as f64 * (self.d as f64).ln();
            self.points.push((state.n() as f64, ln_m));
        }
    }

    /// Least-squares slope of `ln M_n` over the last half of the trace,
    /// exponentiated: `κ = e^slope`. Systems whose counts never exceed 1
    /// report `(0, 1)`.
    fn slope(&self) -> (f64, f64) {
        let half = &self.points[self.points.len() / 2..];
        if half.len() < 2 {
            return (0.0, 1.0);
        }
        let n = half.len() as f64;
        let mean_x = half.iter().map(|p| p.0).sum::<f64>() / n;
        let mean_y = half.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = half.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
        let sxx: f64 = half.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
        if sxx == 0.0 {
            return (0.0, 1.0);
        }
        let slope = sxy / sxx;
        (slope, slope.exp())
    }
}

/// Entropy loops can converge after a handful of steps; run the trace out to
/// a stable length before fitting the growth slope.
fn extended_slope(f: &Snre, state: &LogState, mut trace: MagnitudeTrace) -> (f64, f64) {
    let mut s = state.clone();
    let mut extra = 0;
    // bounded: systems whose counts never exceed 1 record no points at all
    while trace.len() < 32 && extra < 64 && !s.all_dead() {
        s = iterate_log(f, &s);
        trace.push(&s);
        extra += 1;
    }
    trace.slope()
}

/// Second-order growth exponent `(ln κ, κ)` from a fresh trace of `steps`
/// iterations. Healthy systems report `κ = d`; bounded or singly-exponential
/// growth drives `ln κ` to zero.
pub fn degree_estimate(f: &Snre, steps: usize) -> Result<(f64, f64)> {
    if steps < 4 {
        return Err(Error::Validation("degree estimate needs at least 4 steps".into()));
    }
    let mut state = LogState::initial(f);
    if state.all_dead() {
        return Err(Error::DeadSymbol { symbol: 0, context: "degree estimate on empty system" });
    }
    let mut trace = MagnitudeTrace::new(f.d());
    trace.push(&state);
    for _ in 1..steps {
        state = iterate_log(f, &state);
        if state.all_dead() {
            break;
        }
        trace.push(&state);
    }
    Ok(trace.slope())
}

// ---------------------------------------------------------------------------
// closed-form series for two-symbol systems
// ---------------------------------------------------------------------------

/// Partial sums of a dominated series `Σ w_j · t_j` with non-negative terms
/// below a known bound, so the tail after `J` terms is certified.
#[derive(Debug, Clone)]
pub struct SeriesAccumulator {
    sum: f64,
    terms: usize,
    weight: f64,
    weight_ratio: f64,
    term_bound: f64,
}

impl SeriesAccumulator {
    /// `weight_ratio` is the geometric weight decay per term (e.g. `1/d`);
    /// `term_bound` bounds every unweighted term from above.
    pub fn new(lead: f64, first_weight: f64, weight_ratio: f64, term_bound: f64) -> Self {
        Self { sum: lead, terms: 0, weight: first_weight, weight_ratio, term_bound }
    }

    /// Push the next term; slightly negative values (float noise on an
    /// exactly-zero term) are clamped.
    pub fn push(&mut self, term: f64) {
        let term = term.max(0.0);
        self.sum += self.weight * term;
        self.weight *= self.weight_ratio;
        self.terms += 1;
    }

    pub fn partial(&self) -> f64 {
        self.sum
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// Upper bound on the remaining tail `Σ_{j > J} w_j · t_j`.
    pub fn tail_bound(&self) -> f64 {
        self.weight * self.term_bound / (1.0 - self.weight_ratio)
    }
}

/// Leading-monomial data for a dominated two-symbol system: the exponent
/// matrix of the first items, its left Perron weights, and, for the
/// oscillating route, the order-2 expansion marker.
#[derive(Debug, Clone)]
pub struct LinearizedRecursion {
    pub k_matrix: [[u8; 2]; 2],
    pub weights: [f64; 2],
    pub expansion_order: u8,
}

impl LinearizedRecursion {
    /// Two-step expansion of the oscillating system: `a_{n+2} = a_n⁴·r`,
    /// `b_{n+2} = a_n²b_n²·r'`, so the exponent matrix is `[[4, 0], [2, 2]]`
    /// with leading eigenvalue `d² = 4` and weights concentrated on the
    /// odd-step leader.
    fn for_oscillating() -> Self {
        Self { k_matrix: [[4, 0], [2, 2]], weights: [1.0, 0.0], expansion_order: 2 }
    }

    /// Geometric decay of the series weights: the reciprocal of the leading
    /// eigenvalue of `K` (the common row sum `d`, or `d²` for the two-step
    /// expansion).
    fn weight_ratio(&self) -> f64 {
        1.0 / self.k_matrix[0].iter().map(|&e| e as f64).sum::<f64>()
    }

    /// Leading monomials sorted by descending power of the dominant symbol
    /// (assumed to be symbol 1 after normalization). The weight vector is the
    /// left eigenvector of `K` at eigenvalue `d`, normalized to sum 1; both
    /// rows sum to `d`, so the eigenvalue is always `d`.
    fn for_dominant(f: &Snre, order: &[Symbol; 2]) -> Result<Self> {
        let d = f.d() as u8;
        let lead = |s: Symbol| -> Result<[u8; 2]> {
            let eq = f.equation(s);
            let best = eq
                .terms()
                .max_by_key(|(m, _)| m.exponent_of(order[0]))
                .ok_or(Error::DeadSymbol { symbol: s, context: "dominating series" })?;
            Ok([best.0.exponent_of(order[0]), best.0.exponent_of(order[1])])
        };
        let row_a = lead(order[0])?;
        let row_b = lead(order[1])?;
        if row_a[0] == 0 && row_b[0] == 0 && row_a[1] == d {
            // F_1^(a) a pure power of the dominated symbol is impossible for
            // a live dominating pair.
            return Err(Error::SeriesPrecondition(
                "leading item of the dominant equation is a pure power of the other symbol".into(),
            ));
        }
        let k_matrix = [row_a, row_b];
        // left eigenvector at eigenvalue d: w ∝ (K21, d - K11)
        let weights = if row_a[0] == d {
            [1.0, 0.0]
        } else if row_b[0] == 0 {
            [0.0, 1.0]
        } else {
            let w1 = row_b[0] as f64;
            let w2 = (d - row_a[0]) as f64;
            [w1 / (w1 + w2), w2 / (w1 + w2)]
        };
        Ok(Self { k_matrix, weights, expansion_order: 1 })
    }
}

fn require_two_symbols(f: &Snre, what: &str) -> Result<()> {
    if f.k() != 2 {
        return Err(Error::Unsupported(format!("{what} requires a two-symbol system")));
    }
    Ok(())
}

fn require_22(f: &Snre, what: &str) -> Result<()> {
    if f.d() != 2 || f.k() != 2 {
        return Err(Error::Unsupported(format!(
            "{what} requires (d, k) = (2, 2); use the generic engine otherwise"
        )));
    }
    Ok(())
}

/// Equal-growth closed form: all height-1 counts equal `a_1`, every count
/// stays equal forever, and `h = ln(a_1) / d` with zero residual.
pub fn entropy_type_e(f: &Snre) -> Result<EntropyResult> {
    if !classify::is_equal_growth(f) {
        return Err(Error::SeriesPrecondition("height-1 counts are not all equal".into()));
    }
    let a1 = f.initial(1);
    if a1 == 0 {
        return Ok(empty_result(1, Method::EqualGrowthClosedForm));
    }
    let h = (a1 as f64).ln() / f.d() as f64;
    let (ln_kappa, kappa) = degree_estimate(f, 32)?;
    Ok(EntropyResult {
        h,
        residual: 0.0,
        iterations: 1,
        method: Method::EqualGrowthClosedForm,
        ln_kappa,
        kappa,
        flags: Vec::new(),
    }
    .checked(entropy_cap(f)))
}

/// Dominating series for two-symbol systems (any `d`): project the log
/// recursion onto the left Perron weights `w` of the leading-exponent matrix,
/// where it telescopes into
///
/// ```text
/// h = (d-1)/d² · ( w·v_1 + Σ_{j≥1} d^{-j} · w·ln r_j ),
/// ```
///
/// `r_j^(i)` being the ratio of equation `i` to its leading item along the
/// trajectory (`1 ≤ r ≤ |F^(i)|`). Dominance of `dominant` is re-checked at
/// every step.
pub fn entropy_type_d(f: &Snre, dominant: Symbol, tol: f64) -> Result<EntropyResult> {
    require_two_symbols(f, "dominating series")?;
    if f.d() < 2 {
        return Err(Error::Unsupported(
            "the dominating series needs branching d >= 2; one-generator systems use the linear path".into(),
        ));
    }
    if dominant == 0 || dominant > 2 {
        return Err(Error::Validation(format!("symbol {dominant} out of range 1..=2")));
    }
    let other = 3 - dominant;
    if f.initial(dominant) == 0 || f.initial(other) == 0 {
        return Err(Error::DeadSymbol { symbol: other, context: "dominating series" });
    }
    let d = f.d() as f64;
    let order = [dominant, other];
    let lin = LinearizedRecursion::for_dominant(f, &order)?;
    let w = lin.weights;
    let items_max = f.initials().iter().copied().max().unwrap_or(1).max(2) as f64;

    let mut state = LogState::initial(f);
    let v1 = [
        (f.initial(dominant) as f64).ln(),
        (f.initial(other) as f64).ln(),
    ];
    let mut acc = SeriesAccumulator::new(
        w[0] * v1[0] + w[1] * v1[1],
        1.0 / d,
        1.0 / d,
        items_max.ln(),
    );
    let lead_exp = |row: [u8; 2]| {
        move |delta_dom: f64, delta_oth: f64| row[0] as f64 * delta_dom + row[1] as f64 * delta_oth
    };
    let lead_a = lead_exp(lin.k_matrix[0]);
    let lead_b = lead_exp(lin.k_matrix[1]);

    let scale = (d - 1.0) / (d * d);
    loop {
        if state.offset(dominant) < state.offset(other) - 1e-9 {
            return Err(Error::DominanceViolated { step: state.n() });
        }
        let off_dom = state.offset(dominant);
        let off_oth = state.offset(other);
        // ln r^(i) = LSE_i(δ) - ⟨leading exponents, δ⟩, all O(1) quantities
        let ra = equation_offset_value(f, dominant, &state.delta) - lead_a(off_dom, off_oth);
        let rb = equation_offset_value(f, other, &state.delta) - lead_b(off_dom, off_oth);
        // 1 <= r^(i) <= |F^(i)|, so the weighted term stays in [0, ln items]
        debug_assert!(ra >= -1e-9 && rb >= -1e-9, "item ratio below 1: {ra}, {rb}");
        debug_assert!(
            ra <= items_max.ln() + 1e-9 && rb <= items_max.ln() + 1e-9,
            "item ratio above the coefficient sum: {ra}, {rb}"
        );
        acc.push(w[0] * ra + w[1] * rb);
        state = iterate_log(f, &state);
        if state.all_dead() {
            return Err(Error::DeadSymbol { symbol: dominant, context: "dominating series" });
        }
        if scale * acc.tail_bound() * 0.5 + FLOAT_SLOP <= tol || acc.terms() > 400 {
            break;
        }
    }
    let tail = acc.tail_bound();
    let h = scale * (acc.partial() + 0.5 * tail);
    let (ln_kappa, kappa) = degree_estimate(f, 32.max(acc.terms()))?;
    Ok(EntropyResult {
        h,
        residual: scale * tail * 0.5 + FLOAT_SLOP,
        iterations: acc.terms(),
        method: Method::DominatingSeries,
        ln_kappa,
        kappa,
        flags: Vec::new(),
    }
    .checked(entropy_cap(f)))
}

/// Cooperating series at `(2, 2)`: with `c_n = a_n + b_n`, the trajectory
/// must satisfy `c_n = c_{n-1}² + g_{n-1}` with `0 ≤ g ≤ c²`, and
///
/// ```text
/// h = ¼ · ( ln c_1 + Σ_{j≥1} 2^{-j} · ln(1 + g_j/c_j²) ),
/// ```
///
/// each term lying in `[0, ln 2]`. The inequality is checked on every step.
pub fn entropy_type_c(f: &Snre, tol: f64) -> Result<EntropyResult> {
    require_22(f, "cooperating series")?;
    if f.initial(1) == 0 || f.initial(2) == 0 {
        return Err(Error::DeadSymbol { symbol: 1, context: "cooperating series" });
    }
    let c1 = (f.initial(1) + f.initial(2)) as f64;
    let mut state = LogState::initial(f);
    let mut acc = SeriesAccumulator::new(c1.ln(), 0.5, 0.5, std::f64::consts::LN_2);
    let scale = 0.25;
    loop {
        let lt = state.total_offset();
        let (next, info) = step(f, &state);
        if next.all_dead() {
            return Err(Error::DeadSymbol { symbol: 1, context: "cooperating series" });
        }
        // ln c_{n+1} - 2 ln c_n = u_{n+1} + LT_{n+1} - 2 LT_n ∈ [0, ln 2]
        let t = info.u + next.total_offset() - 2.0 * lt;
        if !(-1e-9..=std::f64::consts::LN_2 + 1e-9).contains(&t) {
            return Err(Error::SeriesPrecondition(format!(
                "total-count increment {t:.6} outside [0, ln 2] at step {}",
                state.n()
            )));
        }
        acc.push(t);
        state = next;
        if scale * acc.tail_bound() * 0.5 + FLOAT_SLOP <= tol || acc.terms() > 400 {
            break;
        }
    }
    let tail = acc.tail_bound();
    let h = scale * (acc.partial() + 0.5 * tail);
    let (ln_kappa, kappa) = degree_estimate(f, 32.max(acc.terms()))?;
    Ok(EntropyResult {
        h,
        residual: scale * tail * 0.5 + FLOAT_SLOP,
        iterations: acc.terms(),
        method: Method::CooperatingSeries,
        ln_kappa,
        kappa,
        flags: Vec::new(),
    }
    .checked(entropy_cap(f)))
}

/// Oscillating series at `(2, 2)`: only the system `a' = ab + b², b' = a²`
/// (up to swapping the two symbols) oscillates. Expanding two steps gives
/// `a_{n+2} = a_n⁴ · r_n` with `r_n = 1 + 1/τ_n + 1/τ_n²` along odd steps,
/// whence
///
/// ```text
/// h = ¼ · ( ln a_1 + Σ_{j≥1} 4^{-j} · ln r_{2j-1} ),     ln r ∈ [0, ln(7/4)].
/// ```
pub fn entropy_type_o(f: &Snre, tol: f64) -> Result<EntropyResult> {
    require_22(f, "oscillating series")?;
    // F^(a) = a·b + b², F^(b) = a², expressed over the global monomial basis
    // (x1², x1x2, x2²) for either choice of the leading symbol a.
    let shape = |a: Symbol| {
        let (va, vb): ([u64; 3], [u64; 3]) = if a == 1 {
            ([0, 1, 1], [1, 0, 0])
        } else {
            ([1, 1, 0], [0, 0, 1])
        };
        f.equation(a).indicator_vector().coefficients() == va
            && f.equation(3 - a).indicator_vector().coefficients() == vb
    };
    let lead = if shape(1) {
        1
    } else if shape(2) {
        2
    } else {
        return Err(Error::SeriesPrecondition(
            "not the oscillating shape (x·y + y², x²)".into(),
        ));
    };
    let other = 3 - lead;
    let lin = LinearizedRecursion::for_oscillating();
    let ratio = lin.weight_ratio();
    // along odd steps the ratio is at least 2, so r = 1 + 1/τ + 1/τ² ≤ 7/4
    let term_bound = (7.0f64 / 4.0).ln();
    let mut acc =
        SeriesAccumulator::new((f.initial(lead) as f64).ln(), ratio, ratio, term_bound);
    let scale = 0.25;

    let mut state = LogState::initial(f); // n = 1, odd
    loop {
        // odd step: the leading symbol must be ahead by a factor >= 2
        let gap = state.offset(lead) - state.offset(other);
        if gap < std::f64::consts::LN_2 - 1e-9 {
            return Err(Error::SeriesPrecondition(format!(
                "odd-step ratio dropped below 2 at step {}",
                state.n()
            )));
        }
        let alpha_old = state.offset(lead);
        // ln r = α_{n+2} - 4·α_n; the magnitude part telescopes through the
        // two inner steps as 2·u_{n+1} + u_{n+2}
        let mut m_shift = 0.0;
        for _ in 0..lin.expansion_order {
            let (next, info) = step(f, &state);
            m_shift = f.d() as f64 * m_shift + info.u;
            state = next;
        }
        let expansion_factor = 1.0 / ratio; // leading eigenvalue of the expansion
        let t = m_shift + state.offset(lead) - expansion_factor * alpha_old;
        debug_assert!(t >= -1e-9 && t <= term_bound + 1e-9, "r out of range: {t}");
        acc.push(t);
        if scale * acc.tail_bound() * 0.5 + FLOAT_SLOP <= tol || acc.terms() > 200 {
            break;
        }
    }
    let tail = acc.tail_bound();
    let h = scale * (acc.partial() + 0.5 * tail);
    let (ln_kappa, kappa) = degree_estimate(f, 40)?;
    Ok(EntropyResult {
        h,
        residual: scale * tail * 0.5 + FLOAT_SLOP,
        iterations: 2 * acc.terms() + 1,
        method: Method::OscillatingSeries,
        ln_kappa,
        kappa,
        flags: Vec::new(),
    }
    .checked(entropy_cap(f)))
}

/// Closed-form entropy when a series route applies, or an error describing
/// why none does.
pub fn entropy_closed(f: &Snre, tol: f64) -> Result<EntropyResult> {
    if classify::is_equal_growth(f) {
        return entropy_type_e(f);
    }
    if f.d() == 2 && f.k() == 2 {
        let label = classify::classify_type_22(f)?;
        return match label.primary() {
            Some(SnreType::EqualGrowth) => entropy_type_e(f),
            Some(SnreType::Oscillating) => entropy_type_o(f, tol),
            Some(SnreType::Cooperating) => entropy_type_c(f, tol),
            Some(SnreType::Dominating) => {
                let dominant = if f.initial(1) >= f.initial(2) { 1 } else { 2 };
                entropy_type_d(f, dominant, tol)
            }
            None => Err(Error::Unsupported("no closed-form route".into())),
        };
    }
    Err(Error::Unsupported(
        "closed forms cover equal-growth systems and (d, k) = (2, 2)".into(),
    ))
}

/// Preferred route with generic fallback: closed form when available and
/// healthy, the certified generic iteration otherwise.
pub fn entropy_auto(f: &Snre, tol: f64, max_iter: usize) -> Result<EntropyResult> {
    match entropy_closed(f, tol) {
        Ok(r) => Ok(r),
        Err(Error::Validation(e)) => Err(Error::Validation(e)),
        Err(_) => entropy_generic(f, tol, max_iter),
    }
}
