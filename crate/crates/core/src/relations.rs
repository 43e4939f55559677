//! Test-surface relations on the coefficients of `[M^1_{2k,k}]`.
//!
//! Each row pairs a linear form in the unknown coefficients with a
//! right-hand side that depends on `k` through the enumerative counts. Rows
//! are stored in normalized form (prefactors divided out), so the RHS is
//! rational in general.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::basis::{enumerate_basis, BasisError, ClassExpression, ClassLabel};
use crate::enumerative::{
    castelnuovo_n, count_ell, count_m, count_n, sum_d, sum_s16, sum_t, EnumerativeError, SchubertIndex,
};
use crate::exactnum::{format_rational, int, BigRational};
use crate::solver::{RationalMatrix, SolverError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("right-hand side {rhs} needs g = 2k, got g={g}, k={k}")]
    GenusDegreeMismatch { rhs: RhsDescriptor, g: i64, k: i64 },
    #[error("genus {0} is below the supported range (g >= 5)")]
    GenusTooSmall(i64),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Enumerative(#[from] EnumerativeError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("export failed: {0}")]
    Export(String),
}

fn csv_error(e: csv::Error) -> RelationError {
    RelationError::Export(e.to_string())
}

pub type Result<T> = std::result::Result<T, RelationError>;

/// Which test surface a row comes from, with its index parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceTag {
    pub group: u8,
    pub params: Vec<i64>,
}

impl SurfaceTag {
    fn new(group: u8, params: &[i64]) -> Self {
        SurfaceTag { group, params: params.to_vec() }
    }
}

impl fmt::Display for SurfaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.group)?;
        if !self.params.is_empty() {
            let p: Vec<String> = self.params.iter().map(i64::to_string).collect();
            write!(f, "({})", p.join(","))?;
        }
        Ok(())
    }
}

/// Symbolic right-hand side, evaluated once `k` is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RhsDescriptor {
    Zero,
    /// `T_i / ((2i−2)(2(g−i)−2))`
    TOverNorm(i64),
    /// `D_ij / ((2i−2)(2j−2))`
    DOverNorm(i64, i64),
    /// `n_{g−2,k,(0,1)} / (g−3)`
    NOver,
    /// `D_{2,i} / (6(i−1))`
    DOver6(i64),
    /// `4·N_{g−4,k,(0,1),(0,1)}`
    FourN,
    /// `2·ℓ_{g−2,k}`
    TwoEll,
    /// `Σ m·N / (2i−2)`
    S16Sum(i64),
    /// `m_{g−2,k,(0,1)} / (2g−6)`
    S16Special,
}

impl fmt::Display for RhsDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use RhsDescriptor::*;
        match self {
            Zero => f.write_str("0"),
            TOverNorm(i) => write!(f, "TOverNorm({i})"),
            DOverNorm(i, j) => write!(f, "DOverNorm({i},{j})"),
            NOver => f.write_str("NOver"),
            DOver6(i) => write!(f, "DOver6({i})"),
            FourN => f.write_str("FourN"),
            TwoEll => f.write_str("TwoEll"),
            S16Sum(i) => write!(f, "S16Sum({i})"),
            S16Special => f.write_str("S16Special"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub source: SurfaceTag,
    pub coefficients: ClassExpression,
    pub rhs: RhsDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSystem {
    pub g: i64,
    pub rows: Vec<Relation>,
    pub labels: Vec<ClassLabel>,
}

struct Builder {
    g: i64,
    rows: Vec<Relation>,
}

impl Builder {
    fn row(&mut self, group: u8, params: &[i64], terms: &[(i64, ClassLabel)], rhs: RhsDescriptor) -> Result<()> {
        let mut e = ClassExpression::zero(self.g);
        for (c, l) in terms {
            e.accumulate(*l, &int(*c))?;
        }
        self.rows.push(Relation { source: SurfaceTag::new(group, params), coefficients: e, rhs });
        Ok(())
    }
}

/// The full list of normalized relations in genus `g`.
///
/// For `g ≥ 6` there is one row per basis element. In genus 5 the (S10)
/// surface does not exist and the system has one row fewer.
pub fn build_relations(g: i64) -> Result<RelationSystem> {
    use ClassLabel::*;
    use RhsDescriptor::*;
    if g < 5 {
        return Err(RelationError::GenusTooSmall(g));
    }
    let (k1, k2, d0s, ld0, d1s, ld1, ld2) = (Kappa1Sq, Kappa2, Delta0Sq, LambdaDelta0, Delta1Sq, LambdaDelta1, LambdaDelta2);
    let om = Omega;
    let la = Lambda;
    let th = Theta;
    let d = DeltaPair;
    let mut b = Builder { g, rows: Vec::new() };

    for i in 2..=g / 2 {
        b.row(1, &[i], &[(2, k1), (-1, om(i)), (-1, om(g - i))], TOverNorm(i))?;
    }
    for i in 2..=g - 3 {
        for j in i..=g - 3 {
            if i + j < g {
                b.row(2, &[i, j], &[(2, k1), (1, d(i, j))], DOverNorm(i, j))?;
            }
        }
    }
    b.row(3, &[], &[(4, k1), (-1, om(2)), (-1, om(g - 2)), (-1, d(1, g - 2)), (2, d(0, g - 2))], NOver)?;
    for i in 2..=g - 3 {
        b.row(4, &[i], &[(4, k1), (-1, d(1, i)), (2, d(0, i)), (1, d(2, i))], DOver6(i))?;
    }
    b.row(5, &[], &[(2, k1), (-12, d(0, g - 1)), (2, d1s), (-1, ld1)], Zero)?;
    for i in 3..=g - 3 {
        b.row(6, &[i], &[(2, k1), (-1, la(i)), (1, d(1, g - i)), (-12, d(0, g - i))], Zero)?;
    }
    b.row(6, &[g - 2], &[(2, k1), (-1, ld2), (1, d(1, 2)), (-12, d(0, 2))], Zero)?;
    b.row(
        7,
        &[],
        &[(8, k1), (1, d(2, 2)), (-2, d(1, 2)), (1, d(1, 1)), (2, d1s), (8, d0s), (4, d(0, 0)), (4, d(0, 2)), (-4, d(0, 1))],
        FourN,
    )?;
    b.row(
        8,
        &[],
        &[(2, k1), (288, d0s), (24, ld0), (2, d1s), (-2, ld1), (144, d(0, 0)), (1, d(1, 1)), (-24, d(0, 1))],
        Zero,
    )?;
    for j in 2..=g - 3 {
        b.row(
            9,
            &[j],
            &[(2, k1), (2, d(1, j)), (1, d(j, g - j - 2)), (-1, d(2, j)), (-2, d(j, g - j - 1)), (-1, om(j)), (-1, om(g - j))],
            Zero,
        )?;
    }
    if g >= 6 {
        // several labels coincide for g in {6,7,8}; accumulation handles it,
        // except for the genus-six δ₁² coefficient
        let d1sq = if g == 6 { 18 } else { 12 };
        b.row(
            10,
            &[],
            &[
                (2, k1),
                (d1sq, d1s),
                (6, d(1, 1)),
                (3, d(1, g - 5)),
                (2, d(1, 3)),
                (1, d(3, g - 5)),
                (3, d(1, g - 3)),
                (-1, om(3)),
                (-1, om(g - 3)),
                (-3, d(2, g - 3)),
                (-3, d(2, g - 5)),
                (-6, d(1, 2)),
                (-6, d(1, g - 4)),
                (-2, d(3, g - 4)),
                (-3, d(1, 2)),
                (-1, d(2, 3)),
                (6, d(2, g - 4)),
                (3, d(2, 2)),
            ],
            Zero,
        )?;
    }
    b.row(
        11,
        &[],
        &[
            (2, k1),
            (-1, la(g - 3)),
            (6, d1s),
            (3, d(1, 1)),
            (-3, ld1),
            (1, d(1, 3)),
            (-36, d(0, 1)),
            (-12, d(0, 3)),
            (3, ld2),
            (36, d(0, 2)),
            (-3, d(1, 2)),
        ],
        Zero,
    )?;
    b.row(
        12,
        &[],
        &[
            (2, k1),
            (-3, ld1),
            (-24, d(0, 1)),
            (-12, d(0, g - 3)),
            (-12, d(0, g - 1)),
            (6, d1s),
            (2, d(1, 1)),
            (1, d(1, g - 3)),
            (-1, la(3)),
            (2, ld2),
            (24, d(0, g - 2)),
            (-2, d(1, g - 2)),
            (1, ld2),
            (12, d(0, 2)),
            (-1, d(1, 2)),
        ],
        Zero,
    )?;
    let a = 2 * (g - 3);
    b.row(
        13,
        &[],
        &[
            (4 * a, k1),
            (2 * a, d(0, 0)),
            (4 * a, d0s),
            (a, d(0, 2)),
            (2, d(0, g - 2)),
            (-1, om(2)),
            (-1, om(g - 2)),
            (-a, d(0, 1)),
            (-1, d(1, g - 2)),
            (-2, d(0, 1)),
            (-1, d(1, 2)),
            (1, d(1, 1)),
            (2, d1s),
        ],
        TwoEll,
    )?;
    let c = 2 * g - 4;
    b.row(
        14,
        &[],
        &[(2 * c, k1), (-c, ld0), (-24 * c, d0s), (-12 * c, d(0, 0)), (c, d(0, 1)), (-12, d(0, g - 1)), (12, d(0, 1)), (-1, d(1, 1))],
        Zero,
    )?;
    b.row(
        15,
        &[],
        &[(8 * g * g - 26 * g + 20, k1), (2 * g - 4, k2), (4 - 2 * g, d1s), (8 * (g - 1) * (g - 2), d0s)],
        Zero,
    )?;
    for i in g / 2..=g - 3 {
        b.row(
            16,
            &[i],
            &[(4 * i - 1, k1), (1, k2), (1, om(i)), (-1, om(i + 1)), (1, d1s), (2 * i - 1, d(1, g - i - 1))],
            S16Sum(i),
        )?;
    }
    b.row(
        16,
        &[g - 2],
        &[(4 * g - 9, k1), (1, k2), (1, om(g - 2)), (4 * g - 8, d1s), (2 * g - 5, d(1, 1))],
        S16Special,
    )?;
    b.row(
        17,
        &[],
        &[(3, k1), (1, k2), (-2, ld0), (1, ld1), (-44, d0s), (-1, d1s), (12, d(0, g - 1)), (-12, d(0, 0)), (1, th(1))],
        Zero,
    )?;
    for i in 4..=(g + 1) / 2 {
        b.row(
            18,
            &[i],
            &[
                (3, k1),
                (1, k2),
                (-1, om(i)),
                (-1, om(g - i + 1)),
                (-1, d1s),
                (1, d(i - 1, g - i)),
                (-1, la(i)),
                (-1, la(g - i + 1)),
                (1, ld1),
                (-12, d(0, i - 1)),
                (-12, d(0, g - i)),
                (12, d(0, g - 1)),
                (12, th(i - 1)),
            ],
            Zero,
        )?;
    }
    b.row(
        18,
        &[3],
        &[
            (3, k1),
            (1, k2),
            (-1, om(3)),
            (-1, om(g - 2)),
            (-1, d1s),
            (1, d(2, g - 3)),
            (-1, la(3)),
            (-1, ld2),
            (1, ld1),
            (-12, d(0, 2)),
            (-12, d(0, g - 3)),
            (12, d(0, g - 1)),
            (12, th(2)),
        ],
        Zero,
    )?;
    b.row(
        18,
        &[2],
        &[
            (3, k1),
            (1, k2),
            (-1, om(2)),
            (1, d(1, g - 2)),
            (-1, ld2),
            (-12, d(0, 1)),
            (-12, d(0, g - 2)),
            (12, d(0, g - 1)),
            (12, th(1)),
        ],
        Zero,
    )?;
    Ok(RelationSystem { g, rows: b.rows, labels: enumerate_basis(g) })
}

/// Evaluates the right-hand side of `rel` (a row of the genus-`g` system)
/// at degree `k`.
pub fn evaluate_rhs(rel: &Relation, g: i64, k: i64) -> Result<BigRational> {
    use RhsDescriptor::*;
    if rel.rhs == Zero {
        return Ok(BigRational::zero());
    }
    if g != 2 * k {
        return Err(RelationError::GenusDegreeMismatch { rhs: rel.rhs, g, k });
    }
    let big = |x: num_bigint::BigInt| BigRational::from_integer(x);
    let simple = SchubertIndex::SIMPLE;
    Ok(match rel.rhs {
        Zero => unreachable!(),
        TOverNorm(i) => big(sum_t(i, g, k)?) / int((2 * i - 2) * (2 * (g - i) - 2)),
        DOverNorm(i, j) => big(sum_d(i, j, g, k)?) / int((2 * i - 2) * (2 * j - 2)),
        NOver => big(count_n(g - 2, k, simple)?) / int(g - 3),
        DOver6(i) => big(sum_d(2, i, g, k)?) / int(6 * (i - 1)),
        FourN => castelnuovo_n(g - 4, k, simple, simple)? * int(4),
        TwoEll => big(count_ell(g - 2, k)?) * int(2),
        S16Sum(i) => big(sum_s16(i, g, k)?) / int(2 * i - 2),
        S16Special => big(count_m(g - 2, k, simple)?) / int(2 * g - 6),
    })
}

impl RelationSystem {
    /// `Q_g`: rows in system order, columns in basis order.
    pub fn matrix(&self) -> RationalMatrix {
        RationalMatrix::from_rows(self.rows.iter().map(|r| r.coefficients.to_vector()).collect())
    }

    pub fn rhs_vector(&self, k: i64) -> Result<Vec<BigRational>> {
        self.rows.iter().map(|r| evaluate_rhs(r, self.g, k)).collect()
    }

    /// CSV with a `source` column, one column per label and an `rhs` column
    /// that holds the evaluated value when `k` is given and the descriptor
    /// otherwise.
    pub fn to_csv(&self, k: Option<i64>) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let mut header = vec!["source".to_string()];
        header.extend(self.labels.iter().map(ToString::to_string));
        header.push("rhs".into());
        w.write_record(&header).map_err(csv_error)?;
        for r in &self.rows {
            let mut record = vec![r.source.to_string()];
            record.extend(r.coefficients.to_vector().iter().map(format_rational));
            record.push(self.rhs_cell(r, k)?);
            w.write_record(&record).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| RelationError::Export(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn to_json(&self, k: Option<i64>) -> Result<Value> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let coeffs: serde_json::Map<String, Value> = r
                    .coefficients
                    .iter()
                    .map(|(l, v)| (l.to_string(), Value::String(format_rational(v))))
                    .collect();
                Ok(json!({"source": r.source.to_string(), "coeffs": coeffs, "rhs": self.rhs_cell(r, k)?}))
            })
            .collect::<Result<Vec<_>>>()?;
        let labels: Vec<String> = self.labels.iter().map(ToString::to_string).collect();
        Ok(json!({"g": self.g, "k": k, "labels": labels, "rows": rows}))
    }

    fn rhs_cell(&self, r: &Relation, k: Option<i64>) -> Result<String> {
        Ok(match k {
            Some(k) => format_rational(&evaluate_rhs(r, self.g, k)?),
            None => r.rhs.to_string(),
        })
    }
}

pub fn build_matrix(g: i64) -> Result<RationalMatrix> {
    Ok(build_relations(g)?.matrix())
}

pub fn build_rhs_vector(system: &RelationSystem, k: i64) -> Result<Vec<BigRational>> {
    system.rhs_vector(k)
}

struct Columns {
    g: i64,
    cols: Vec<ClassExpression>,
}

impl Columns {
    fn col(&mut self, terms: &[(BigRational, ClassLabel)]) -> Result<()> {
        let mut e = ClassExpression::zero(self.g);
        for (c, l) in terms {
            e.accumulate(*l, c)?;
        }
        self.cols.push(e);
        Ok(())
    }

    fn coli(&mut self, terms: &[(i64, ClassLabel)]) -> Result<()> {
        let t: Vec<(BigRational, ClassLabel)> = terms.iter().map(|(c, l)| (int(*c), *l)).collect();
        self.col(&t)
    }
}

/// The columns `T_g` that make `Q_g·T_g` lower-triangular.
///
/// In (T14) the lone `ω^(g/2)` term appears only for even `g`: for odd `g`
/// the doubled sum over `s < g/2` already covers `ω^(⌊g/2⌋)`.
pub fn build_t(g: i64) -> Result<RationalMatrix> {
    use ClassLabel::*;
    if g < 6 {
        return Err(RelationError::GenusTooSmall(g));
    }
    let (om, la, th, d) = (Omega, Lambda, Theta, DeltaPair);
    let mut t = Columns { g, cols: Vec::new() };
    for i in 2..=g / 2 {
        t.coli(&[(1, om(i))])?;
    }
    for i in 2..=g - 3 {
        for j in i..=g - 3 {
            if i + j < g {
                t.coli(&[(1, d(i, j))])?;
            }
        }
    }
    t.coli(&[(1, d(1, g - 2))])?;
    for i in 2..=g - 3 {
        t.coli(&[(1, d(1, i))])?;
    }
    t.coli(&[(1, d(0, g - 1))])?;
    for i in 3..=g - 3 {
        t.coli(&[(1, la(i))])?;
    }
    t.coli(&[(1, LambdaDelta2)])?;
    t.coli(&[(1, d(1, 1))])?;
    t.coli(&[(1, LambdaDelta0)])?;
    t.coli(&[(2, d(1, 2)), (1, d(0, 2)), (-10, LambdaDelta2)])?;
    for j in 3..=g - 3 {
        t.coli(&[(2, d(1, j)), (1, d(0, j)), (-10, la(g - j))])?;
    }
    t.coli(&[(60, LambdaDelta1), (12, Delta1Sq), (-3, d(0, g - 1)), (8, d(0, 1)), (2, d(0, 0))])?;
    t.coli(&[(12, LambdaDelta1), (1, LambdaDelta0), (-1, d(0, g - 1))])?;
    t.coli(&[(1, d(0, g - 2)), (2, d(1, g - 2))])?;
    t.coli(&[(12, LambdaDelta1), (6, LambdaDelta0), (-1, d(0, g - 1)), (-1, d(0, 1)), (-1, d(0, 0))])?;

    let mut t14 = vec![(6, Kappa1Sq)];
    if g % 2 == 0 {
        t14.push((6, om(g / 2)));
    }
    t14.extend((2..g).filter(|s| 2 * s < g).map(|s| (12, om(s))));
    t14.extend([(72, LambdaDelta0), (144, LambdaDelta1), (144, LambdaDelta2)]);
    t14.extend((3..=g - 3).map(|s| (144, la(s))));
    for l in enumerate_basis(g) {
        if let DeltaPair(i, j) = l {
            t14.push((if (i, j) == (0, g - 1) { -11 } else { -12 }, l));
        }
    }
    t.coli(&t14)?;
    t.coli(&[(1, Kappa2)])?;
    for i in g / 2..=g - 3 {
        t.coli(&[(1, om(i + 1)), (-1, om(g - i - 1))])?;
    }

    // S = Σ_{2s ≤ g} 12(g/2 − s)(ω^(g−s) − ω^(s))
    let half = crate::exactnum::ratio(g, 2);
    let mut s_terms: Vec<(BigRational, ClassLabel)> = Vec::new();
    for s in (2..g).filter(|s| 2 * s <= g) {
        let w = int(12) * (&half - int(s));
        s_terms.push((w.clone(), om(g - s)));
        s_terms.push((-w, om(s)));
    }
    let scaled = |f: BigRational| -> Vec<(BigRational, ClassLabel)> {
        s_terms.iter().map(|(c, l)| (c * &f, *l)).collect()
    };
    let gm1 = int(g - 1);
    let mut c = scaled(gm1.clone());
    c.extend([
        (&gm1 * int(12), Delta1Sq),
        (&gm1 * int(-24), d(1, 1)),
        (&gm1 * int(2), d(0, g - 1)),
        (int(3), Delta0Sq),
        (int(-6), d(0, 0)),
    ]);
    t.col(&c)?;
    let mut c = vec![(int(6 * g), Kappa2)];
    c.extend(scaled(int(1)));
    c.extend([
        (int(12) * (int(1) - &half), Delta1Sq),
        (int(12 * (g - 2)), d(1, 1)),
        (int(-3), Delta0Sq),
        (int(2 - g), d(0, g - 1)),
        (int(6), d(0, 0)),
    ]);
    t.col(&c)?;
    for i in 4..=(g + 1) / 2 {
        t.coli(&[(1, th(i - 1))])?;
    }
    t.coli(&[(1, th(2))])?;
    let mut c = vec![(int(-6 * g), Kappa2)];
    c.extend(scaled(int(-1)));
    c.extend([
        (int(12) * (&half - int(1)), Delta1Sq),
        (int(12 * (2 - g)), d(1, 1)),
        (int(3), Delta0Sq),
        (int(g - 2), d(0, g - 1)),
        (int(-6), d(0, 0)),
        (int(72), th(1)),
    ]);
    t.col(&c)?;

    let rows: Vec<Vec<BigRational>> = t.cols.iter().map(ClassExpression::to_vector).collect();
    Ok(RationalMatrix::from_rows(rows).transpose())
}

/// Outcome of checking that `Q·T` is lower-triangular with nonzero diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangularityReport {
    pub order: usize,
    /// Nonzero entries strictly above the diagonal, as `(row, col)`.
    pub violations: Vec<(usize, usize)>,
    pub zero_diagonal: Vec<usize>,
}

impl TriangularityReport {
    pub fn is_triangular(&self) -> bool {
        self.violations.is_empty() && self.zero_diagonal.is_empty()
    }
}

pub fn triangularity_report(q: &RationalMatrix, t: &RationalMatrix) -> Result<TriangularityReport> {
    if !q.is_square() || !t.is_square() || q.rows() != t.rows() {
        return Err(SolverError::DimensionMismatch {
            expected: format!("two square matrices of order {}", q.rows()),
            got: format!("{}x{} and {}x{}", q.rows(), q.cols(), t.rows(), t.cols()),
        }
        .into());
    }
    let p = q.mul(t)?;
    let n = p.rows();
    let mut violations = Vec::new();
    let mut zero_diagonal = Vec::new();
    for i in 0..n {
        if p.get(i, i).is_zero() {
            zero_diagonal.push(i);
        }
        for j in i + 1..n {
            if !p.get(i, j).is_zero() {
                violations.push((i, j));
            }
        }
    }
    Ok(TriangularityReport { order: n, violations, zero_diagonal })
}
