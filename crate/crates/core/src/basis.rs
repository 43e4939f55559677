//! Generators of the codimension-two tautological classes `R^2(M_g)` and
//! linear combinations over them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::exactnum::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error("class {label} is not a generator in genus {g}")]
    OutOfRange { label: ClassLabel, g: i64 },
    #[error("cannot parse class label {0:?}")]
    Parse(String),
}

/// A generator of `R^2(M_g)`.
///
/// The derived ordering is the frozen basis order: the seven products, then
/// `ω^(i)`, `λ^(i)`, `δ_ij` (lexicographic, so `δ_00`, `δ_0j` come first)
/// and `θ_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    Kappa1Sq,
    Kappa2,
    Delta0Sq,
    LambdaDelta0,
    Delta1Sq,
    LambdaDelta1,
    LambdaDelta2,
    Omega(i64),
    Lambda(i64),
    DeltaPair(i64, i64),
    Theta(i64),
}

impl ClassLabel {
    /// Whether the label is one of the generators in genus `g`.
    pub fn is_valid_for(&self, g: i64) -> bool {
        use ClassLabel::*;
        match *self {
            Kappa1Sq | Kappa2 | Delta0Sq | LambdaDelta0 | Delta1Sq | LambdaDelta1 | LambdaDelta2 => true,
            Omega(i) => 2 <= i && i <= g - 2,
            Lambda(i) => 3 <= i && i <= g - 3,
            DeltaPair(0, 0) => true,
            DeltaPair(0, j) => 1 <= j && j < g,
            DeltaPair(i, j) => 1 <= i && i <= j && j <= g - 2 && i + j < g,
            Theta(i) => 1 <= i && i <= (g - 1) / 2,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ClassLabel::*;
        match self {
            Kappa1Sq => f.write_str("k1^2"),
            Kappa2 => f.write_str("k2"),
            Delta0Sq => f.write_str("d0^2"),
            LambdaDelta0 => f.write_str("ld0"),
            Delta1Sq => f.write_str("d1^2"),
            LambdaDelta1 => f.write_str("ld1"),
            LambdaDelta2 => f.write_str("ld2"),
            Omega(i) => write!(f, "om({i})"),
            Lambda(i) => write!(f, "la({i})"),
            DeltaPair(i, j) => write!(f, "d({i},{j})"),
            Theta(i) => write!(f, "th({i})"),
        }
    }
}

impl FromStr for ClassLabel {
    type Err = BasisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use ClassLabel::*;
        let err = || BasisError::Parse(s.to_string());
        let fixed = match s {
            "k1^2" => Some(Kappa1Sq),
            "k2" => Some(Kappa2),
            "d0^2" => Some(Delta0Sq),
            "ld0" => Some(LambdaDelta0),
            "d1^2" => Some(Delta1Sq),
            "ld1" => Some(LambdaDelta1),
            "ld2" => Some(LambdaDelta2),
            _ => None,
        };
        if let Some(label) = fixed {
            return Ok(label);
        }
        let (head, rest) = s.split_once('(').ok_or_else(err)?;
        let args = rest.strip_suffix(')').ok_or_else(err)?;
        let nums: Vec<i64> = args
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| err()))
            .collect::<Result<_, _>>()?;
        match (head, nums.as_slice()) {
            ("om", [i]) => Ok(Omega(*i)),
            ("la", [i]) => Ok(Lambda(*i)),
            ("th", [i]) => Ok(Theta(*i)),
            ("d", [i, j]) => Ok(DeltaPair(*i, *j)),
            _ => Err(err()),
        }
    }
}

/// `⌊(g²−1)/4⌋ + 3g − 1`.
pub fn basis_dimension(g: i64) -> usize {
    ((g * g - 1) / 4 + 3 * g - 1) as usize
}

/// The generators of `R^2(M_g)` in the frozen order.
pub fn enumerate_basis(g: i64) -> Vec<ClassLabel> {
    use ClassLabel::*;
    let mut out = vec![
        Kappa1Sq,
        Kappa2,
        Delta0Sq,
        LambdaDelta0,
        Delta1Sq,
        LambdaDelta1,
        LambdaDelta2,
    ];
    out.extend((2..=g - 2).map(Omega));
    out.extend((3..=g - 3).map(Lambda));
    out.push(DeltaPair(0, 0));
    out.extend((1..=g - 1).map(|j| DeltaPair(0, j)));
    for i in 1..=g - 2 {
        for j in i..=g - 2 {
            if i + j < g {
                out.push(DeltaPair(i, j));
            }
        }
    }
    out.extend((1..=(g - 1) / 2).map(Theta));
    out
}

/// Brings a label as written in a relation template into canonical form.
///
/// `δ_ij` indices are sorted. In genus 5, where no `λ^(i)` generators exist,
/// `λ^(2)` and `λ^(3)` are identified with `λδ_2` (the same identification
/// the `i = g−2` variants of the relations make explicitly). Coincident
/// labels are not merged here; the caller accumulates the multipliers.
pub fn canonicalize(raw: ClassLabel, g: i64) -> Result<Vec<(ClassLabel, BigRational)>, BasisError> {
    use ClassLabel::*;
    let label = match raw {
        DeltaPair(i, j) if i > j => DeltaPair(j, i),
        Lambda(2) | Lambda(3) if g == 5 => LambdaDelta2,
        other => other,
    };
    if !label.is_valid_for(g) {
        return Err(BasisError::OutOfRange { label: raw, g });
    }
    Ok(vec![(label, BigRational::from_integer(1.into()))])
}

/// Ordered generators of one genus with a reverse index.
#[derive(Debug, Clone)]
pub struct Basis {
    g: i64,
    labels: Vec<ClassLabel>,
    index: HashMap<ClassLabel, usize>,
}

impl Basis {
    pub fn new(g: i64) -> Self {
        let labels = enumerate_basis(g);
        let index = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        Basis { g, labels, index }
    }

    pub fn genus(&self) -> i64 {
        self.g
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, label: &ClassLabel) -> Option<usize> {
        self.index.get(label).copied()
    }
}

/// A rational linear combination of generators in a fixed genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassExpression {
    g: i64,
    coefficients: BTreeMap<ClassLabel, BigRational>,
}

impl ClassExpression {
    pub fn zero(g: i64) -> Self {
        ClassExpression { g, coefficients: BTreeMap::new() }
    }

    pub fn genus(&self) -> i64 {
        self.g
    }

    /// Coefficient of `label`; absent labels are zero.
    pub fn get(&self, label: &ClassLabel) -> BigRational {
        self.coefficients.get(label).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn set(&mut self, label: ClassLabel, value: BigRational) -> Result<(), BasisError> {
        if !label.is_valid_for(self.g) {
            return Err(BasisError::OutOfRange { label, g: self.g });
        }
        if value.is_zero() {
            self.coefficients.remove(&label);
        } else {
            self.coefficients.insert(label, value);
        }
        Ok(())
    }

    /// Adds `value` to the coefficient of `label` after canonicalizing it.
    pub fn accumulate(&mut self, raw: ClassLabel, value: &BigRational) -> Result<(), BasisError> {
        for (label, mult) in canonicalize(raw, self.g)? {
            let next = self.get(&label) + value * mult;
            self.set(label, next)?;
        }
        Ok(())
    }

    /// Nonzero entries in basis order.
    pub fn iter(&self) -> impl Iterator<Item = (&ClassLabel, &BigRational)> {
        self.coefficients.iter()
    }

    /// Dense coefficient vector in the order of `enumerate_basis(g)`.
    pub fn to_vector(&self) -> Vec<BigRational> {
        enumerate_basis(self.g).iter().map(|l| self.get(l)).collect()
    }

    pub fn from_vector(g: i64, values: &[BigRational]) -> Self {
        let labels = enumerate_basis(g);
        assert_eq!(labels.len(), values.len(), "vector length does not match basis");
        let coefficients = labels
            .into_iter()
            .zip(values.iter().cloned())
            .filter(|(_, v)| !v.is_zero())
            .collect();
        ClassExpression { g, coefficients }
    }

    /// Labels (in basis order) where the two expressions differ, with
    /// `(self, other)` coefficients.
    pub fn diff(&self, other: &ClassExpression) -> Vec<(ClassLabel, BigRational, BigRational)> {
        let mut labels: Vec<ClassLabel> = self
            .coefficients
            .keys()
            .chain(other.coefficients.keys())
            .copied()
            .collect();
        labels.sort();
        labels.dedup();
        labels
            .into_iter()
            .filter_map(|l| {
                let (a, b) = (self.get(&l), other.get(&l));
                (a != b).then_some((l, a, b))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use ClassLabel::*;

    #[test]
    fn dimension_examples() {
        assert_eq!(basis_dimension(6), 25);
        assert_eq!(basis_dimension(5), 20);
        assert_eq!(basis_dimension(12), 70);
        assert_eq!(basis_dimension(7), 32);
    }

    #[test]
    fn genus_six_basis() {
        let b = enumerate_basis(6);
        assert_eq!(b.len(), 25);
        let pairs: Vec<(i64, i64)> = b
            .iter()
            .filter_map(|l| match l {
                DeltaPair(i, j) => Some((*i, *j)),
                _ => None,
            })
            .collect();
        assert_eq!(
            pairs,
            vec![(0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3)]
        );
        assert_eq!(&b[..7], &[Kappa1Sq, Kappa2, Delta0Sq, LambdaDelta0, Delta1Sq, LambdaDelta1, LambdaDelta2]);
        assert_eq!(b.last(), Some(&Theta(2)));
    }

    #[test]
    fn genus_five_has_no_lambda() {
        let b = enumerate_basis(5);
        assert_eq!(b.len(), 20);
        assert!(!b.iter().any(|l| matches!(l, Lambda(_))));
        assert_eq!(enumerate_basis(7).len(), 32);
    }

    #[test]
    fn enumeration_is_complete_sorted_and_valid() {
        for g in 5..=20 {
            let b = enumerate_basis(g);
            assert_eq!(b.len(), basis_dimension(g), "g={g}");
            assert!(b.windows(2).all(|w| w[0] < w[1]), "order/duplicates at g={g}");
            assert!(b.iter().all(|l| l.is_valid_for(g)));
            // every range-valid label appears
            let mut all = vec![Kappa1Sq, Kappa2, Delta0Sq, LambdaDelta0, Delta1Sq, LambdaDelta1, LambdaDelta2];
            for i in -1..=g + 1 {
                all.extend([Omega(i), Lambda(i), Theta(i)]);
                for j in -1..=g + 1 {
                    all.push(DeltaPair(i, j));
                }
            }
            let valid = all.into_iter().filter(|l| l.is_valid_for(g)).count();
            assert_eq!(valid, b.len());
        }
    }

    #[test]
    fn basis_index_is_inverse_of_order() {
        let b = Basis::new(8);
        assert_eq!(b.len(), basis_dimension(8));
        for (i, l) in b.labels().iter().enumerate() {
            assert_eq!(b.position(l), Some(i));
        }
        assert_eq!(b.position(&Omega(7)), None);
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize(DeltaPair(3, 1), 6).unwrap(), vec![(DeltaPair(1, 3), int(1))]);
        assert_eq!(canonicalize(Lambda(3), 5).unwrap(), vec![(LambdaDelta2, int(1))]);
        assert_eq!(canonicalize(Lambda(2), 5).unwrap(), vec![(LambdaDelta2, int(1))]);
        assert!(canonicalize(Lambda(2), 6).is_err());
        assert!(canonicalize(Omega(5), 6).is_err());
        assert!(canonicalize(DeltaPair(3, 3), 6).is_err());
    }

    #[test]
    fn canonicalize_is_idempotent() {
        for g in 5..=12 {
            for l in enumerate_basis(g) {
                let once = canonicalize(l, g).unwrap();
                assert_eq!(once, vec![(l, int(1))]);
            }
        }
    }

    #[test]
    fn coincident_labels_accumulate() {
        let mut e = ClassExpression::zero(6);
        e.accumulate(Omega(3), &int(-1)).unwrap();
        e.accumulate(Omega(6 - 3), &int(-1)).unwrap();
        assert_eq!(e.get(&Omega(3)), int(-2));
        e.accumulate(Omega(3), &int(2)).unwrap();
        assert_eq!(e.iter().count(), 0);
    }

    #[test]
    fn label_strings_roundtrip() {
        for g in [5, 6, 9] {
            for l in enumerate_basis(g) {
                assert_eq!(l.to_string().parse::<ClassLabel>().unwrap(), l);
            }
        }
        assert_eq!(DeltaPair(1, 4).to_string(), "d(1,4)");
        assert_eq!(Kappa1Sq.to_string(), "k1^2");
        assert!("d(1)".parse::<ClassLabel>().is_err());
        assert!("xx".parse::<ClassLabel>().is_err());
    }

    #[test]
    fn vector_roundtrip_and_diff() {
        let g = 6;
        let v: Vec<BigRational> = (0..basis_dimension(g) as i64).map(|i| int(i % 3)).collect();
        let e = ClassExpression::from_vector(g, &v);
        assert_eq!(e.to_vector(), v);
        let mut f = e.clone();
        f.set(Theta(2), int(7)).unwrap();
        let d = e.diff(&f);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].0, Theta(2));
        assert!(f.set(Theta(3), int(1)).is_err());
    }
}
