//! Counts of pencils on general (pointed) curves.
//!
//! Everything here is for series of rank one except [`castelnuovo_general`],
//! which evaluates the reciprocal-factorial determinant for any rank. The
//! aggregate sums at the bottom are the intersection numbers of the test
//! surfaces with the Brill-Noether locus, before normalization.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{factorial, inv_factorial_or_zero, BigInt, BigRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerativeError {
    #[error("Schubert index {index} is not valid for type ({r},{d})")]
    InvalidIndex { index: SchubertIndex, r: i64, d: i64 },
    #[error("malformed ramification sequence {seq:?} for rank {r}, degree {d}")]
    MalformedSequence { seq: Vec<i64>, r: i64, d: i64 },
    #[error("adjusted Brill-Noether number is {got}, expected {expected}")]
    WrongRho { expected: i64, got: i64 },
    #[error("rho({g},1,{d}) = {rho} < 0: a general curve carries no such pencil")]
    NegativeBaseRho { g: i64, d: i64, rho: i64 },
    #[error("ell is defined for g = 2k-2 with k >= 2, got g={g}, k={k}")]
    GenusDegreeMismatch { g: i64, k: i64 },
    #[error("count {0} is not integral: outside the counting regime")]
    NonIntegral(String),
}

pub type Result<T> = std::result::Result<T, EnumerativeError>;

/// Ramification pair `(α₀, α₁)` of a pencil at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchubertIndex {
    pub a0: i64,
    pub a1: i64,
}

impl SchubertIndex {
    pub const ZERO: SchubertIndex = SchubertIndex { a0: 0, a1: 0 };
    /// Simple ramification.
    pub const SIMPLE: SchubertIndex = SchubertIndex { a0: 0, a1: 1 };

    pub const fn new(a0: i64, a1: i64) -> Self {
        SchubertIndex { a0, a1 }
    }

    pub fn weight(&self) -> i64 {
        self.a0 + self.a1
    }

    /// `0 ≤ α₀ ≤ α₁ ≤ d − r`.
    pub fn is_valid_for(&self, r: i64, d: i64) -> bool {
        0 <= self.a0 && self.a0 <= self.a1 && self.a1 <= d - r
    }

    fn check(&self, d: i64) -> Result<()> {
        if self.is_valid_for(1, d) {
            Ok(())
        } else {
            Err(EnumerativeError::InvalidIndex { index: *self, r: 1, d })
        }
    }

    /// The index complementary to `self` in degree `d`:
    /// `(d−1−α₁, d−1−α₀)`.
    pub fn complement(&self, d: i64) -> SchubertIndex {
        SchubertIndex::new(d - 1 - self.a1, d - 1 - self.a0)
    }

    /// All indices of type `(1, d)`, ordered by `α₁` then `α₀`.
    pub fn all_for_degree(d: i64) -> impl Iterator<Item = SchubertIndex> {
        (0..d).flat_map(|a1| (0..=a1).map(move |a0| SchubertIndex::new(a0, a1)))
    }
}

impl fmt::Display for SchubertIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a0, self.a1)
    }
}

/// Genus, rank and degree of a Brill-Noether problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BNContext {
    pub g: i64,
    pub r: i64,
    pub d: i64,
}

impl BNContext {
    pub fn rho(&self) -> i64 {
        self.g - (self.r + 1) * (self.g - self.d + self.r)
    }
}

/// Adjusted Brill-Noether number `g − (r+1)(g−d+r) − Σ α_j(p_i)`.
pub fn rho(g: i64, r: i64, d: i64, ramifications: &[SchubertIndex]) -> Result<i64> {
    let mut value = BNContext { g, r, d }.rho();
    for a in ramifications {
        if !a.is_valid_for(r, d) {
            return Err(EnumerativeError::InvalidIndex { index: *a, r, d });
        }
        value -= a.weight();
    }
    Ok(value)
}

/// Subtracts the base locus `α₀p + β₀q`.
///
/// The reduced indices are not checked against the reduced degree: when the
/// two base loci overlap, `α₁ − α₀` may exceed `d' − 1`.
pub fn reduce_base_locus(
    d: i64,
    alpha: SchubertIndex,
    beta: SchubertIndex,
) -> Result<(i64, SchubertIndex, SchubertIndex)> {
    alpha.check(d)?;
    beta.check(d)?;
    let d2 = d - alpha.a0 - beta.a0;
    let a = SchubertIndex::new(0, alpha.a1 - alpha.a0);
    let b = SchubertIndex::new(0, beta.a1 - beta.a0);
    Ok((d2, a, b))
}

fn check_sequence(seq: &[i64], r: i64, d: i64) -> Result<()> {
    let ok = seq.len() as i64 == r + 1
        && seq.first().is_some_and(|&x| x >= 0)
        && seq.windows(2).all(|w| w[0] <= w[1])
        && seq.last().is_some_and(|&x| x <= d - r);
    if ok {
        Ok(())
    } else {
        Err(EnumerativeError::MalformedSequence { seq: seq.to_vec(), r, d })
    }
}

/// Determinant of a small square matrix of rationals by cofactor expansion.
/// The matrices here have order `r+1`, so this stays cheap.
fn small_det(m: &[Vec<BigRational>]) -> BigRational {
    match m.len() {
        0 => BigRational::one(),
        1 => m[0][0].clone(),
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<BigRational>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * small_det(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .fold(BigRational::zero(), |acc, t| acc + t),
    }
}

/// Adjusted Castelnuovo number
/// `g! det(1/[α_i + i + β_{r−j} + r − j + g − d]!)`.
///
/// In the counting regime `ρ(g,r,d,α,β) = 0` this is a nonnegative integer;
/// elsewhere it is still evaluated but may be fractional.
pub fn castelnuovo_general(
    g: i64,
    r: i64,
    d: i64,
    alpha: &[i64],
    beta: &[i64],
) -> Result<BigRational> {
    check_sequence(alpha, r, d)?;
    check_sequence(beta, r, d)?;
    let n = (r + 1) as usize;
    let m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = alpha[i] + i as i64 + beta[n - 1 - j] + (r - j as i64) + g - d;
                    inv_factorial_or_zero(e)
                })
                .collect()
        })
        .collect();
    Ok(small_det(&m) * BigRational::from_integer(factorial(g)))
}

/// `N_{g,d,α,β}`: pencils with ramification `α` at `p` and `β` at `q` on a
/// general two-pointed curve, by the two-term closed form after removing
/// the base locus.
pub fn castelnuovo_n(
    g: i64,
    d: i64,
    alpha: SchubertIndex,
    beta: SchubertIndex,
) -> Result<BigRational> {
    let (d, a, b) = reduce_base_locus(d, alpha, beta)?;
    a.check(d)?;
    b.check(d)?;
    let h = g - d;
    let first = inv_factorial_or_zero(b.a1 + 1 + h) * inv_factorial_or_zero(a.a1 + 1 + h);
    let second = inv_factorial_or_zero(h) * inv_factorial_or_zero(a.a1 + b.a1 + 2 + h);
    Ok((first - second) * BigRational::from_integer(factorial(g)))
}

/// `N_{g,d,α}`: one general point, no condition at the other.
pub fn castelnuovo_n_single(g: i64, d: i64, alpha: SchubertIndex) -> Result<BigRational> {
    castelnuovo_n(g, d, alpha, SchubertIndex::ZERO)
}

/// Result of [`count_n_flagged`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NCount {
    pub value: BigInt,
    /// Set when `2d' − g − 1 ≤ 0` after reduction; the closed form is then
    /// replaced by 0 and the value is not a meaningful count.
    pub degenerate: bool,
}

/// `n_{g,d,α}` together with the degeneracy flag.
pub fn count_n_flagged(g: i64, d: i64, alpha: SchubertIndex) -> Result<NCount> {
    alpha.check(d)?;
    let got = rho(g, 1, d, &[alpha])?;
    if got != -1 {
        return Err(EnumerativeError::WrongRho { expected: -1, got });
    }
    let d = d - alpha.a0;
    let base = BNContext { g, r: 1, d }.rho();
    if base < 0 {
        return Err(EnumerativeError::NegativeBaseRho { g, d, rho: base });
    }
    let lead = 2 * d - g - 1;
    if lead <= 0 {
        return Ok(NCount { value: BigInt::zero(), degenerate: true });
    }
    let value = BigInt::from(lead * (lead + 1) * (lead + 2)) * factorial(g)
        / (factorial(d) * factorial(g - d));
    Ok(NCount { value, degenerate: false })
}

/// `n_{g,d,α}`: pairs (point, pencil) on a general curve of genus `g` with
/// ramification `α` at the point, when `ρ(g,1,d,α) = −1`.
pub fn count_n(g: i64, d: i64, alpha: SchubertIndex) -> Result<BigInt> {
    count_n_flagged(g, d, alpha).map(|n| n.value)
}

/// `m_{g,d,α} = n_{g,d,α}·(3g−1)`: adds a second, simply ramified moving point.
pub fn count_m(g: i64, d: i64, alpha: SchubertIndex) -> Result<BigInt> {
    alpha.check(d)?;
    let got = rho(g, 1, d, &[alpha, SchubertIndex::SIMPLE])?;
    if got != -2 {
        return Err(EnumerativeError::WrongRho { expected: -2, got });
    }
    let reduced = SchubertIndex::new(0, alpha.a1 - alpha.a0);
    Ok(count_n(g, d - alpha.a0, reduced)? * (3 * g - 1))
}

/// `ℓ_{g,k}` for `g = 2k − 2`: `2` when `k = 2`, else `2(2k−3)!/((k−2)!(k−1)!)`.
pub fn count_ell(g: i64, k: i64) -> Result<BigInt> {
    if k < 2 || g != 2 * k - 2 {
        return Err(EnumerativeError::GenusDegreeMismatch { g, k });
    }
    if k == 2 {
        return Ok(BigInt::from(2));
    }
    Ok(BigInt::from(2) * factorial(2 * k - 3) / (factorial(k - 2) * factorial(k - 1)))
}

/// Indices of type `(1,k)` with `ρ(i,1,k,α) = −1`.
fn rho_minus_one(i: i64, k: i64) -> impl Iterator<Item = SchubertIndex> {
    SchubertIndex::all_for_degree(k).filter(move |a| rho(i, 1, k, &[*a]) == Ok(-1))
}

fn to_integer(x: BigRational) -> Result<BigInt> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(EnumerativeError::NonIntegral(x.to_string()))
    }
}

/// `T_i = Σ_α n_{i,k,α} · n_{g−i,k,α^c}` over `ρ(i,1,k,α) = −1`.
///
/// Like the other sums, pairs whose counts are undefined (negative base
/// `ρ`) contribute nothing.
pub fn sum_t(i: i64, g: i64, k: i64) -> Result<BigInt> {
    Ok(rho_minus_one(i, k)
        .filter_map(|a| {
            let left = count_n(i, k, a).ok()?;
            let right = count_n(g - i, k, a.complement(k)).ok()?;
            Some(left * right)
        })
        .sum())
}

/// `D_{ij} = Σ_{α,β} n_{i,k,α} n_{j,k,β} N_{g−i−j,k,α^c,β^c}`.
///
/// Fails with `NonIntegral` when a Castelnuovo number falls outside the
/// counting regime, which happens only for `g ≠ 2k`.
pub fn sum_d(i: i64, j: i64, g: i64, k: i64) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for a in rho_minus_one(i, k) {
        let Ok(na) = count_n(i, k, a) else { continue };
        for b in rho_minus_one(j, k) {
            let Ok(nb) = count_n(j, k, b) else { continue };
            let Ok(n) = castelnuovo_n(g - i - j, k, a.complement(k), b.complement(k)) else {
                continue;
            };
            total += &na * &nb * to_integer(n)?;
        }
    }
    Ok(total)
}

/// The (S4) intersection number `Σ_α 2·N_{g−i−2,k,(0,1),α^c}·n_{i,k,α}`.
///
/// It equals `sum_d(2, i, g, k) / 3`; kept as an independent route.
pub fn sum_s4(i: i64, g: i64, k: i64) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for a in rho_minus_one(i, k) {
        let Ok(n) = count_n(i, k, a) else { continue };
        let Ok(big_n) = castelnuovo_n(g - i - 2, k, SchubertIndex::SIMPLE, a.complement(k)) else { continue };
        total += BigInt::from(2) * to_integer(big_n)? * n;
    }
    Ok(total)
}

/// `Σ_{α₀+α₁ = g−i−1} m_{i,k,α} · N_{g−i−1,k,α^c}` (the (S16) count for
/// `i < g−2`).
pub fn sum_s16(i: i64, g: i64, k: i64) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for a in SchubertIndex::all_for_degree(k).filter(|a| a.weight() == g - i - 1) {
        let Ok(m) = count_m(i, k, a) else { continue };
        let Ok(n) = castelnuovo_n_single(g - i - 1, k, a.complement(k)) else { continue };
        total += m * to_integer(n)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::exactnum::{int, ratio};
    use proptest::prelude::*;

    fn si(a0: i64, a1: i64) -> SchubertIndex {
        SchubertIndex::new(a0, a1)
    }

    fn n(g: i64, d: i64, a: SchubertIndex) -> i64 {
        i64::try_from(count_n(g, d, a).unwrap()).unwrap()
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(6, 1, 3, &[]).unwrap(), -2);
        assert_eq!(rho(0, 1, 1, &[]).unwrap(), 0);
        assert_eq!(rho(4, 1, 3, &[si(0, 1)]).unwrap(), -1);
        assert!(rho(4, 1, 3, &[si(0, 3)]).is_err());
        assert!(rho(4, 1, 3, &[si(2, 1)]).is_err());
    }

    #[test]
    fn base_locus_reduction() {
        assert_eq!(reduce_base_locus(3, si(1, 2), si(0, 0)).unwrap(), (2, si(0, 1), si(0, 0)));
        assert_eq!(reduce_base_locus(5, si(0, 2), si(0, 3)).unwrap(), (5, si(0, 2), si(0, 3)));
        assert_eq!(reduce_base_locus(4, si(1, 1), si(1, 3)).unwrap(), (2, si(0, 0), si(0, 2)));
        assert!(reduce_base_locus(3, si(0, 3), si(0, 0)).is_err());
        assert!(castelnuovo_n(3, 4, si(1, 1), si(1, 3)).is_err());
    }

    #[test]
    fn castelnuovo_general_examples() {
        assert_eq!(castelnuovo_general(2, 1, 2, &[0, 0], &[0, 0]).unwrap(), int(1));
        assert_eq!(castelnuovo_general(0, 1, 1, &[0, 0], &[0, 0]).unwrap(), int(1));
        assert_eq!(castelnuovo_general(2, 1, 3, &[0, 1], &[0, 1]).unwrap(), int(2));
        assert!(castelnuovo_general(2, 1, 3, &[0], &[0, 1]).is_err());
        assert!(castelnuovo_general(2, 1, 3, &[1, 0], &[0, 1]).is_err());
    }

    #[test]
    fn castelnuovo_general_rank_two() {
        // Classical Castelnuovo numbers g! Π i!/(g−d+r+i)!: five g^2_6 on a
        // general genus-6 curve, two g^1_3 in genus 4.
        assert_eq!(castelnuovo_general(6, 2, 6, &[0, 0, 0], &[0, 0, 0]).unwrap(), int(5));
        assert_eq!(castelnuovo_general(4, 1, 3, &[0, 0], &[0, 0]).unwrap(), int(2));
    }

    #[test]
    fn castelnuovo_n_examples() {
        assert_eq!(castelnuovo_n(2, 3, si(0, 1), si(0, 1)).unwrap(), int(2));
        assert_eq!(
            castelnuovo_n(3, 3, si(0, 1), si(0, 0)).unwrap(),
            castelnuovo_n(3, 3, si(0, 0), si(0, 1)).unwrap()
        );
        assert_eq!(
            castelnuovo_n(2, 3, si(1, 2), si(0, 1)).unwrap(),
            castelnuovo_n(2, 2, si(0, 1), si(0, 1)).unwrap()
        );
        // Outside the rho = 0 regime the determinant is not a count.
        assert_eq!(castelnuovo_n(2, 2, si(0, 1), si(0, 1)).unwrap(), ratio(5, 12));
    }

    #[test]
    fn count_n_examples() {
        assert_eq!(n(4, 3, si(0, 1)), 24);
        assert_eq!(n(2, 2, si(0, 1)), 6);
        assert_eq!(n(2, 3, si(1, 2)), 6);
    }

    #[test]
    fn count_n_preconditions_are_distinct() {
        assert!(matches!(
            count_n(4, 3, si(0, 0)),
            Err(EnumerativeError::WrongRho { expected: -1, got: 0 })
        ));
        // rho(3,1,4,(2,2)) = -1 but after removing the base points the
        // reduced pencil has rho(3,1,2) = -1.
        assert!(matches!(
            count_n(3, 4, si(2, 2)),
            Err(EnumerativeError::NegativeBaseRho { .. })
        ));
        assert!(!count_n_flagged(4, 3, si(0, 1)).unwrap().degenerate);
    }

    #[test]
    fn count_m_examples() {
        assert_eq!(count_m(4, 3, si(0, 1)).unwrap(), BigInt::from(264));
        assert_eq!(count_m(2, 2, si(0, 1)).unwrap(), BigInt::from(30));
        assert_eq!(count_m(2, 3, si(1, 2)).unwrap(), BigInt::from(30));
        assert!(count_m(2, 3, si(0, 1)).is_err());
    }

    #[test]
    fn count_ell_examples() {
        assert_eq!(count_ell(2, 2).unwrap(), BigInt::from(2));
        assert_eq!(count_ell(4, 3).unwrap(), BigInt::from(6));
        assert_eq!(count_ell(6, 4).unwrap(), BigInt::from(20));
        assert!(count_ell(5, 3).is_err());
    }

    /// Independent route for `n`: the displayed product with binomial,
    /// after an explicit base-point removal.
    fn oracle_n(g: i64, d: i64, a: SchubertIndex) -> Option<i64> {
        let d = d - a.a0;
        if 2 * d - g - 2 < 0 || a.a1 - a.a0 != 2 * d - g - 1 {
            return None;
        }
        let x = 2 * d - g - 1;
        let binom = (1..=g).product::<i64>() / ((1..=d).product::<i64>() * (1..=g - d).product::<i64>());
        Some(x * (x + 1) * (x + 2) * binom)
    }

    #[test]
    fn sum_t_against_exhaustive_loop() {
        let (g, k) = (6, 3);
        assert_eq!(sum_t(2, g, k).unwrap(), BigInt::from(144));
        for i in 2..=g / 2 {
            let mut total = 0;
            for a0 in 0..k {
                for a1 in a0..k {
                    if a0 + a1 != 2 * k - i - 1 {
                        continue;
                    }
                    let a = si(a0, a1);
                    if let (Some(x), Some(y)) = (oracle_n(i, k, a), oracle_n(g - i, k, a.complement(k))) {
                        total += x * y;
                    }
                }
            }
            assert_eq!(sum_t(i, g, k).unwrap(), BigInt::from(total), "T_{i}");
        }
        assert_eq!(sum_t(3, g, k).unwrap(), BigInt::from(576));
    }

    #[test]
    fn sums_are_empty_when_no_index_qualifies() {
        // No alpha of type (1,2) has weight 2*2-9-1 < 0.
        assert_eq!(sum_t(9, 18, 2).unwrap(), BigInt::zero());
        assert_eq!(sum_d(9, 9, 18, 2).unwrap(), BigInt::zero());
        assert_eq!(sum_s16(17, 18, 2).unwrap(), BigInt::zero());
    }

    #[test]
    fn sum_d_against_exhaustive_loop() {
        let (g, k) = (6, 3);
        for (i, j) in [(2, 2), (2, 3)] {
            let mut total = BigRational::zero();
            for a in SchubertIndex::all_for_degree(k) {
                for b in SchubertIndex::all_for_degree(k) {
                    if a.weight() != 2 * k - i - 1 || b.weight() != 2 * k - j - 1 {
                        continue;
                    }
                    let (Some(x), Some(y)) = (oracle_n(i, k, a), oracle_n(j, k, b)) else { continue };
                    let ac: Vec<i64> = vec![a.complement(k).a0, a.complement(k).a1];
                    let bc: Vec<i64> = vec![b.complement(k).a0, b.complement(k).a1];
                    total += int(x * y) * castelnuovo_general(g - i - j, 1, k, &ac, &bc).unwrap();
                }
            }
            assert_eq!(BigRational::from_integer(sum_d(i, j, g, k).unwrap()), total, "D_{i}{j}");
        }
        assert_eq!(sum_d(2, 2, g, k).unwrap(), BigInt::from(72));
        assert_eq!(sum_d(2, 3, g, k).unwrap(), BigInt::from(144));
    }

    #[test]
    fn sum_s16_against_exhaustive_loop() {
        let (g, k) = (6, 3);
        let i = 3;
        let mut total = 0;
        for a in SchubertIndex::all_for_degree(k).filter(|a| a.weight() == g - i - 1) {
            let Some(x) = oracle_n(i, k - a.a0, si(0, a.a1 - a.a0)) else { continue };
            let c = a.complement(k);
            let big_n = castelnuovo_general(g - i - 1, 1, k, &[c.a0, c.a1], &[0, 0]).unwrap();
            total += x * (3 * i - 1) * i64::try_from(big_n.to_integer()).unwrap();
        }
        assert_eq!(sum_s16(i, g, k).unwrap(), BigInt::from(total));
        assert_eq!(sum_s16(i, g, k).unwrap(), BigInt::from(192));
        assert_eq!(count_m(g - 2, k, SchubertIndex::SIMPLE).unwrap(), BigInt::from(264));
    }

    #[test]
    fn s4_sum_is_a_third_of_d2i() {
        for k in 3..=6 {
            let g = 2 * k;
            for i in 2..=g - 3 {
                assert_eq!(sum_s4(i, g, k).unwrap() * 3, sum_d(2, i, g, k).unwrap(), "g={g} i={i}");
            }
        }
    }

    #[test]
    fn theorem_one_anchor() {
        // 2·(41/144) − 329/144 + 1975/144 = 12 = T_2 / (2·6)
        let lhs = ratio(82, 144) - ratio(329, 144) + ratio(1975, 144);
        assert_eq!(lhs, int(12));
        assert_eq!(BigRational::from_integer(sum_t(2, 6, 3).unwrap()) / int(12), int(12));
    }

    fn grid() -> impl Iterator<Item = (i64, i64, SchubertIndex, SchubertIndex)> {
        (0..=8).flat_map(|g| {
            (1..=6).flat_map(move |d| {
                SchubertIndex::all_for_degree(d).flat_map(move |a| {
                    SchubertIndex::all_for_degree(d).map(move |b| (g, d, a, b))
                })
            })
        })
    }

    #[test]
    fn closed_form_matches_determinant_on_grid() {
        for (g, d, a, b) in grid() {
            let Ok(closed) = castelnuovo_n(g, d, a, b) else { continue };
            let det = castelnuovo_general(g, 1, d, &[a.a0, a.a1], &[b.a0, b.a1]).unwrap();
            assert_eq!(closed, det, "g={g} d={d} a={a} b={b}");
        }
    }

    #[test]
    fn castelnuovo_is_symmetric_on_grid() {
        for (g, d, a, b) in grid() {
            let (Ok(x), Ok(y)) = (castelnuovo_n(g, d, a, b), castelnuovo_n(g, d, b, a)) else { continue };
            assert_eq!(x, y);
        }
    }

    #[test]
    fn counts_integral_in_counting_regime() {
        for (g, d, a, b) in grid() {
            if rho(g, 1, d, &[a, b]) != Ok(0) {
                continue;
            }
            let Ok(x) = castelnuovo_n(g, d, a, b) else { continue };
            assert!(x.is_integer() && !x.is_negative(), "g={g} d={d} a={a} b={b}: {x}");
        }
    }

    proptest! {
        #[test]
        fn base_locus_invariance(g in 0i64..=8, d in 1i64..=6, s in 0i64..3, t in 0i64..3, a1 in 0i64..6, b1 in 0i64..6) {
            let a = si(0, a1);
            let b = si(0, b1);
            prop_assume!(a.is_valid_for(1, d) && b.is_valid_for(1, d));
            let shifted_a = si(s, a1 + s);
            let shifted_b = si(t, b1 + t);
            let d2 = d + s + t;
            prop_assert_eq!(castelnuovo_n(g, d2, shifted_a, shifted_b).unwrap(), castelnuovo_n(g, d, a, b).unwrap());
            if let Ok(x) = count_n(g, d, a) {
                prop_assert_eq!(count_n(g, d + s, si(s, a1 + s)).unwrap(), x);
            }
            if let Ok(x) = count_m(g, d, a) {
                prop_assert_eq!(count_m(g, d + s, si(s, a1 + s)).unwrap(), x);
            }
        }

        #[test]
        fn counts_are_nonnegative(g in 2i64..=12, d in 1i64..=8, a0 in 0i64..4, a1 in 0i64..8) {
            let a = si(a0, a1);
            if let Ok(x) = count_n(g, d, a) {
                prop_assert!(!x.is_negative());
            }
        }
    }
}
