//! Ground-truth enumeration: count admissible labelings of the height-`n`
//! tree directly, one assignment at a time, and compare against the
//! recursive counts. The enumerator deliberately shares no structure with
//! the recursion it validates — no per-subtree caching, just a depth-first
//! walk over label assignments with pruning on the first inadmissible block.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::sft::{ball_size, BasicSet, Symbol};
use crate::snre::Snre;

const FEASIBILITY_LOG2: f64 = 26.0;

fn check_feasible(b: &BasicSet, n: usize) -> Result<u128> {
    let nodes = ball_size(b.d(), n)?;
    let candidates = (nodes - 1) as f64 * (b.k() as f64).log2();
    if candidates > FEASIBILITY_LOG2 {
        return Err(Error::Infeasible { candidates: (b.k() as f64).powf((nodes - 1) as f64) });
    }
    Ok(nodes)
}

/// Count height-`n` labelings with the root coloured `root_symbol` by
/// exhaustive enumeration. Refuses inputs past the feasibility guard
/// `k^(|E_n| - 1) ≤ 2^26`.
pub fn count_rooted(b: &BasicSet, n: usize, root_symbol: Symbol) -> Result<BigUint> {
    if root_symbol == 0 || root_symbol > b.k() {
        return Err(Error::Validation(format!(
            "root symbol {root_symbol} out of range 1..={}",
            b.k()
        )));
    }
    if n == 0 {
        return Ok(BigUint::from(1u32));
    }
    let nodes = check_feasible(b, n)? as usize;
    let d = b.d();

    // nodes in breadth-first order: children of node v sit at v*d + 1 ..= v*d + d,
    // so assigning positions left to right completes each parent's 2-block
    // exactly when its last child is labeled.
    fn assign(b: &BasicSet, labels: &mut [Symbol], pos: usize, tuple: &mut [Symbol]) -> u64 {
        if pos == labels.len() {
            return 1;
        }
        let d = b.d();
        let mut total = 0;
        for s in 1..=b.k() {
            labels[pos] = s;
            if pos.is_multiple_of(d) {
                let parent = (pos - 1) / d;
                for (j, slot) in tuple.iter_mut().enumerate() {
                    *slot = labels[parent * d + 1 + j];
                }
                if !b.contains(labels[parent], tuple) {
                    continue;
                }
            }
            total += assign(b, labels, pos + 1, tuple);
        }
        total
    }

    let mut labels: Vec<Symbol> = vec![0; nodes];
    labels[0] = root_symbol;
    let mut tuple_buf: Vec<Symbol> = vec![0; d];
    let count = assign(b, &mut labels, 1, &mut tuple_buf);
    Ok(BigUint::from(count))
}

/// One disagreement between the enumerator and the recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub symbol: Symbol,
    pub n: usize,
    pub brute_force: BigUint,
    pub recursive: BigUint,
}

/// Outcome of [`verify_snre`]: every `(symbol, height)` pair checked, and
/// any mismatches found (an empty list is the expected result).
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub n_max: usize,
    pub checks: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare brute-force counts against the exact integer recursion for every
/// root symbol and every height up to `n_max`.
pub fn verify_snre(b: &BasicSet, n_max: usize) -> Result<VerifyReport> {
    check_feasible(b, n_max)?;
    let f = Snre::from_basic(b);
    let recursive = f.exact_counts(n_max);
    let mut checks = 0;
    let mut mismatches = Vec::new();
    for n in 1..=n_max {
        for s in 1..=b.k() {
            let brute = count_rooted(b, n, s)?;
            let rec = recursive[n - 1][s - 1].clone();
            checks += 1;
            if brute != rec {
                mismatches.push(Mismatch { symbol: s, n, brute_force: brute, recursive: rec });
            }
        }
    }
    Ok(VerifyReport { n_max, checks, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::BasicSet;
    use crate::shifts::{chessboard_basic, gms_basic};
    use std::collections::BTreeSet;

    #[test]
    fn gms_counts() {
        let b = gms_basic(2, 2).unwrap();
        assert_eq!(count_rooted(&b, 2, 1).unwrap(), BigUint::from(25u32));
        assert_eq!(count_rooted(&b, 2, 2).unwrap(), BigUint::from(16u32));
    }

    #[test]
    fn full_shift_counts() {
        let b = BasicSet::full_shift(2, 2).unwrap();
        assert_eq!(count_rooted(&b, 2, 1).unwrap(), BigUint::from(64u32));
        assert_eq!(count_rooted(&b, 0, 1).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn empty_block_counts_zero() {
        let blocks = vec![BTreeSet::new(), [vec![1, 1]].into_iter().collect()];
        let b = BasicSet::new(2, 2, blocks).unwrap();
        assert_eq!(count_rooted(&b, 1, 1).unwrap(), BigUint::from(0u32));
    }

    #[test]
    fn verify_gms_to_height_three() {
        let b = gms_basic(2, 2).unwrap();
        let report = verify_snre(&b, 3).unwrap();
        assert!(report.is_ok());
        assert_eq!(report.checks, 6);
        // spot-check the height-3 values: (25+16)² and 25²
        let f = Snre::from_basic(&b);
        let counts = f.exact_counts(3);
        assert_eq!(counts[2][0], BigUint::from(1681u32));
        assert_eq!(counts[2][1], BigUint::from(625u32));
    }

    #[test]
    fn verify_chessboard() {
        let b = chessboard_basic(2, 3).unwrap();
        let report = verify_snre(&b, 2).unwrap();
        assert!(report.is_ok());
    }

    #[test]
    fn infeasible_refused() {
        let b = BasicSet::full_shift(2, 2).unwrap();
        assert!(matches!(count_rooted(&b, 6, 1), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn monotone_under_inclusion() {
        // removing a tuple can only decrease counts
        let full = BasicSet::full_shift(2, 2).unwrap();
        let b = gms_basic(2, 2).unwrap();
        for n in 1..=3 {
            for s in 1..=2 {
                assert!(count_rooted(&b, n, s).unwrap() <= count_rooted(&full, n, s).unwrap());
            }
        }
    }
}
