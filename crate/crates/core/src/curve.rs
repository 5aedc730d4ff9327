//! The projective line and Weierstrass elliptic curves `y^2 = x^3 + Ax + B`.
//!
//! Line bundles are `L = O((k-1)·P0)` with `P0` the point at infinity (`p_∞`
//! on the line, the identity `e` on an elliptic curve). Canonical local data:
//!
//! | point            | uniformizer | trivialization      |
//! |------------------|-------------|---------------------|
//! | line, affine `α` | `t - α`     | identity            |
//! | line, `p_∞`      | `u = 1/t`   | `s ↦ u^(k-1) s`     |
//! | elliptic, `(α,β)`| `x - α`     | identity            |
//! | elliptic, `e`    | `u = -x/y`  | `s ↦ u^(k-1) s`     |
//!
//! Two-torsion points (`β = 0`) have no local data here and are rejected.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::series::{LaurentSeries, TruncatedSeries};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurveModel {
    ProjectiveLine,
    Elliptic { a: Fq, b: Fq },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    /// `p_∞` on the line, the identity `e` on an elliptic curve.
    Infinity,
    Affine(Fq),
    AffineE(Fq, Fq),
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "inf"),
            CurvePoint::Affine(a) => write!(f, "[{}]", a.index()),
            CurvePoint::AffineE(a, b) => write!(f, "[{}, {}]", a.index(), b.index()),
        }
    }
}

/// A monomial section of `O((k-1)·P0)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Monomial {
    /// `t^m` on the line.
    T(u32),
    /// `x^m` on an elliptic curve.
    X(u32),
    /// `x^m · y` on an elliptic curve.
    XY(u32),
}

impl Monomial {
    /// Pole order at the base point.
    pub fn pole_order(self) -> i64 {
        match self {
            Monomial::T(m) => m as i64,
            Monomial::X(m) => 2 * m as i64,
            Monomial::XY(m) => 2 * m as i64 + 3,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::T(m) => write!(f, "t^{}", m),
            Monomial::X(m) => write!(f, "x^{}", m),
            Monomial::XY(m) => write!(f, "x^{}y", m),
        }
    }
}

/// The monomial basis of `H^0(O((k-1)·P0))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionBasis {
    pub curve: CurveModel,
    pub k: usize,
    pub monomials: Vec<Monomial>,
}

impl SectionBasis {
    pub fn new(curve: &CurveModel, k: usize) -> SectionBasis {
        let monomials = match curve {
            CurveModel::ProjectiveLine => (0..k as u32).map(Monomial::T).collect(),
            CurveModel::Elliptic { .. } => {
                if k == 0 {
                    Vec::new()
                } else {
                    let a = (k as u32 - 1) / 2;
                    let mut v: Vec<Monomial> = (0..=a).map(Monomial::X).collect();
                    if k >= 4 {
                        let b = (k as u32 - 4) / 2;
                        v.extend((0..=b).map(Monomial::XY));
                    }
                    v
                }
            }
        };
        SectionBasis { curve: *curve, k, monomials }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

impl CurveModel {
    /// A validated elliptic curve; needs characteristic other than 2, 3 and a
    /// nonzero discriminant.
    pub fn elliptic(field: &Field, a: Fq, b: Fq) -> Result<CurveModel> {
        let c = CurveModel::Elliptic { a, b };
        c.validate(field)?;
        Ok(c)
    }

    pub fn validate(&self, field: &Field) -> Result<()> {
        if let CurveModel::Elliptic { a, b } = *self {
            let p = field.characteristic();
            if p == 2 || p == 3 {
                return Err(Error::Unsupported(format!("elliptic curves in characteristic {}", p)));
            }
            if a.index() >= field.order() || b.index() >= field.order() {
                return Err(Error::InvalidElement("curve coefficient out of range".into()));
            }
            let disc = field.add(
                field.mul(field.from_int(4), field.pow(a, 3)),
                field.mul(field.from_int(27), field.square(b)),
            );
            if disc.is_zero() {
                return Err(Error::SingularCurve);
            }
        }
        Ok(())
    }

    pub fn genus(&self) -> usize {
        match self {
            CurveModel::ProjectiveLine => 0,
            CurveModel::Elliptic { .. } => 1,
        }
    }

    /// Whether `point` is a point of this curve model.
    pub fn contains(&self, field: &Field, point: &CurvePoint) -> bool {
        match (self, point) {
            (_, CurvePoint::Infinity) => true,
            (CurveModel::ProjectiveLine, CurvePoint::Affine(a)) => a.index() < field.order(),
            (CurveModel::Elliptic { a, b }, CurvePoint::AffineE(x, y)) => {
                x.index() < field.order() && y.index() < field.order() && field.square(*y) == weierstrass_rhs(field, *a, *b, *x)
            }
            _ => false,
        }
    }

    pub fn validate_point(&self, field: &Field, point: &CurvePoint) -> Result<()> {
        if self.contains(field, point) {
            Ok(())
        } else {
            Err(Error::PointNotOnCurve(point.to_string()))
        }
    }

    /// `ℓ(O(d·P0))`.
    pub fn sections_of_base_multiple(&self, d: i64) -> usize {
        match self {
            CurveModel::ProjectiveLine => (d + 1).max(0) as usize,
            CurveModel::Elliptic { .. } => match d {
                d if d < 0 => 0,
                0 => 1,
                d => d as usize,
            },
        }
    }
}

fn weierstrass_rhs(field: &Field, a: Fq, b: Fq, x: Fq) -> Fq {
    field.add(field.add(field.pow(x, 3), field.mul(a, x)), b)
}

/// All rational points: `Infinity` first, then affine points in element order.
pub fn rational_points(curve: &CurveModel, field: &Field, budget: u64) -> Result<Vec<CurvePoint>> {
    curve.validate(field)?;
    let elems = field.enumerate(budget)?;
    let mut pts = vec![CurvePoint::Infinity];
    match *curve {
        CurveModel::ProjectiveLine => pts.extend(elems.iter().map(|&a| CurvePoint::Affine(a))),
        CurveModel::Elliptic { a, b } => {
            let q = field.order() as u128;
            if q * q > budget as u128 {
                return Err(Error::BudgetExceeded { needed: q * q, budget: budget as u128, bounds: None });
            }
            for &x in &elems {
                let rhs = weierstrass_rhs(field, a, b, x);
                for &y in &elems {
                    if field.square(y) == rhs {
                        pts.push(CurvePoint::AffineE(x, y));
                    }
                }
            }
        }
    }
    Ok(pts)
}

/// Sum of two points in the group law with `Infinity` as identity.
pub fn elliptic_add(field: &Field, a_coef: Fq, p: CurvePoint, q: CurvePoint) -> Result<CurvePoint> {
    let f = field;
    match (p, q) {
        (CurvePoint::Infinity, r) | (r, CurvePoint::Infinity) => Ok(r),
        (CurvePoint::AffineE(x1, y1), CurvePoint::AffineE(x2, y2)) => {
            let lambda = if x1 == x2 {
                if f.add(y1, y2).is_zero() {
                    return Ok(CurvePoint::Infinity);
                }
                f.div(f.add(f.mul(f.from_int(3), f.square(x1)), a_coef), f.mul(f.from_int(2), y1))?
            } else {
                f.div(f.sub(y2, y1), f.sub(x2, x1))?
            };
            let x3 = f.sub(f.sub(f.square(lambda), x1), x2);
            let y3 = f.sub(f.mul(lambda, f.sub(x1, x3)), y1);
            Ok(CurvePoint::AffineE(x3, y3))
        }
        _ => Err(Error::Unsupported("group law needs elliptic points".into())),
    }
}

/// `Σ n_i P_i` in the group law.
pub fn elliptic_sum(field: &Field, a_coef: Fq, terms: &[(CurvePoint, usize)]) -> Result<CurvePoint> {
    let mut acc = CurvePoint::Infinity;
    for &(p, n) in terms {
        for _ in 0..n {
            acc = elliptic_add(field, a_coef, acc, p)?;
        }
    }
    Ok(acc)
}

/// `ℓ(L) - ℓ(L(-D))` for `L = O((k-1)·P0)`.
pub fn riemann_roch_dimension(field: &Field, curve: &CurveModel, k: usize, divisor: &[(CurvePoint, usize)]) -> Result<usize> {
    let d_l = k as i64 - 1;
    let m: i64 = divisor.iter().map(|&(_, n)| n as i64).sum();
    let full = curve.sections_of_base_multiple(d_l);
    let twisted = d_l - m;
    let sub = match *curve {
        CurveModel::Elliptic { a, .. } if twisted == 0 => {
            // degree zero: O((k-1)e - D) has a section iff it is trivial
            let affine: Vec<(CurvePoint, usize)> = divisor.iter().filter(|(p, _)| *p != CurvePoint::Infinity).copied().collect();
            usize::from(elliptic_sum(field, a, &affine)? == CurvePoint::Infinity)
        }
        _ => curve.sections_of_base_multiple(twisted),
    };
    Ok(full - sub)
}

/// Exponent `e` of the canonical trivialization `s ↦ u^e s` at `point`.
pub fn trivialization_shift(k: usize, point: &CurvePoint) -> i64 {
    match point {
        CurvePoint::Infinity => k as i64 - 1,
        _ => 0,
    }
}

/// Taylor coefficients of `y` at the affine point `(α, β)` in `v = x - α`.
pub fn y_expansion_affine(field: &Field, a_coef: Fq, alpha: Fq, beta: Fq, n: usize) -> Result<TruncatedSeries> {
    let f = field;
    if beta.is_zero() {
        return Err(Error::TwoTorsionPoint(f.format(alpha)));
    }
    let inv2b = f.inv(f.mul(f.from_int(2), beta))?;
    let mut c = vec![Fq::ZERO; n.max(1)];
    c[0] = beta;
    for m in 1..n {
        let forcing = match m {
            1 => f.add(f.mul(f.from_int(3), f.square(alpha)), a_coef),
            2 => f.mul(f.from_int(3), alpha),
            3 => Fq::ONE,
            _ => Fq::ZERO,
        };
        let mut conv = Fq::ZERO;
        for r in 1..m {
            conv = f.add(conv, f.mul(c[r], c[m - r]));
        }
        c[m] = f.mul(f.sub(forcing, conv), inv2b);
    }
    TruncatedSeries::new(f, c)
}

/// The unit `W` with `-1/y = u^3 W` at `e`, solving `W = 1 + A u^4 W^2 + B u^6 W^3`
/// by fixed-point iteration.
pub fn w_expansion(field: &Field, a_coef: Fq, b_coef: Fq, n: usize) -> TruncatedSeries {
    let n = n.max(1);
    let one = TruncatedSeries::one(field, n);
    let u4 = TruncatedSeries::monomial(field, 4, n).scale(a_coef);
    let u6 = TruncatedSeries::monomial(field, 6, n).scale(b_coef);
    let mut w = one.clone();
    loop {
        let w2 = w.mul(&w).expect("same field");
        let w3 = w2.mul(&w).expect("same field");
        let next = one.add(&u4.mul(&w2).expect("same field")).and_then(|s| s.add(&u6.mul(&w3)?)).expect("same field");
        if next == w {
            return w;
        }
        w = next;
    }
}

/// Laurent expansions of `x` and `y` at `e` in `u = -x/y`, each with `rel`
/// certified coefficients.
pub fn identity_expansions(field: &Field, a_coef: Fq, b_coef: Fq, rel: usize) -> Result<(LaurentSeries, LaurentSeries)> {
    let w_inv = w_expansion(field, a_coef, b_coef, rel).inv()?;
    let x = LaurentSeries::new(field, -2, w_inv.coeffs().to_vec());
    let y = LaurentSeries::new(field, -3, w_inv.neg().coeffs().to_vec());
    Ok((x, y))
}

fn check_point_kind(curve: &CurveModel, point: &CurvePoint) -> Result<()> {
    match (curve, point) {
        (_, CurvePoint::Infinity)
        | (CurveModel::ProjectiveLine, CurvePoint::Affine(_))
        | (CurveModel::Elliptic { .. }, CurvePoint::AffineE(..)) => Ok(()),
        _ => Err(Error::PointNotOnCurve(point.to_string())),
    }
}

/// Expansion of the section `mono` itself (no trivialization) at `point`,
/// certified below degree `top`.
pub fn section_laurent_at(field: &Field, curve: &CurveModel, mono: Monomial, point: &CurvePoint, top: i64) -> Result<LaurentSeries> {
    check_point_kind(curve, point)?;
    let regular = |top: i64| top.max(1) as usize;
    match (*curve, *point, mono) {
        (CurveModel::ProjectiveLine, CurvePoint::Affine(alpha), Monomial::T(m)) => {
            let n = regular(top);
            let base = shifted_variable(field, alpha, n);
            Ok(base.pow(m as u64).to_laurent())
        }
        (CurveModel::ProjectiveLine, CurvePoint::Infinity, Monomial::T(m)) => {
            let rel = (top + m as i64).max(1) as usize;
            Ok(LaurentSeries::monomial(field, -(m as i64), rel))
        }
        (CurveModel::Elliptic { a, .. }, CurvePoint::AffineE(alpha, beta), mono) => {
            let n = regular(top);
            let x = shifted_variable(field, alpha, n);
            match mono {
                Monomial::X(m) => Ok(x.pow(m as u64).to_laurent()),
                Monomial::XY(m) => {
                    let y = y_expansion_affine(field, a, alpha, beta, n)?;
                    Ok(x.pow(m as u64).mul(&y)?.to_laurent())
                }
                Monomial::T(_) => Err(Error::Unsupported("t-monomials live on the projective line".into())),
            }
        }
        (CurveModel::Elliptic { a, b }, CurvePoint::Infinity, mono) => {
            let (e, shift) = match mono {
                Monomial::X(m) => (m as u64, -2 * m as i64),
                Monomial::XY(m) => (m as u64 + 1, -2 * m as i64 - 3),
                Monomial::T(_) => return Err(Error::Unsupported("t-monomials live on the projective line".into())),
            };
            let rel = (top - shift).max(1) as usize;
            let w_inv = w_expansion(field, a, b, rel).inv()?;
            let mut s = w_inv.pow(e);
            if matches!(mono, Monomial::XY(_)) {
                s = s.neg();
            }
            Ok(LaurentSeries::new(field, shift, s.coeffs().to_vec()))
        }
        _ => Err(Error::Unsupported(format!("monomial {} on this curve", mono))),
    }
}

/// `α + v` at precision `n`.
fn shifted_variable(field: &Field, alpha: Fq, n: usize) -> TruncatedSeries {
    let mut c = vec![Fq::ZERO; n.max(1)];
    c[0] = alpha;
    if n >= 2 {
        c[1] = Fq::ONE;
    }
    TruncatedSeries::new(field, c).expect("nonempty")
}

/// For each basis section `s`, the first `precision` coefficients of the
/// canonically trivialized section `γ(s)` at `point`.
pub fn expand_basis_at(field: &Field, curve: &CurveModel, k: usize, point: &CurvePoint, precision: usize) -> Result<Vec<TruncatedSeries>> {
    curve.validate(field)?;
    curve.validate_point(field, point)?;
    if let CurvePoint::AffineE(alpha, beta) = point {
        if beta.is_zero() {
            return Err(Error::TwoTorsionPoint(field.format(*alpha)));
        }
    }
    let shift = trivialization_shift(k, point);
    SectionBasis::new(curve, k)
        .monomials
        .iter()
        .map(|&mono| {
            let s = section_laurent_at(field, curve, mono, point, precision as i64 - shift)?;
            s.shift(shift).to_truncated(precision)
        })
        .collect()
}

/// Local expansions of the dual differentials `η_r = t^r dt / Π_affine (t - α_i)^{n_i}`,
/// `r = 0..M-k`, at every point of the divisor: `result[r][i]` is the
/// coefficient series of `η_r` in the canonical uniformizer at point `i`,
/// certified below degree `top`.
pub fn p1_dual_differential_basis(field: &Field, k: usize, divisor: &[(CurvePoint, usize)], top: i64) -> Result<Vec<Vec<LaurentSeries>>> {
    let m: usize = divisor.iter().map(|&(_, n)| n).sum();
    if m < k {
        return Err(Error::NegativeDualDegree(format!("deg D = {} < k = {}", m, k)));
    }
    let affine: Vec<(Fq, usize)> = divisor
        .iter()
        .filter_map(|&(p, n)| match p {
            CurvePoint::Affine(a) => Some((a, n)),
            _ => None,
        })
        .collect();
    let affine_deg: i64 = affine.iter().map(|&(_, n)| n as i64).sum();
    let mut out = Vec::with_capacity(m - k);
    for r in 0..(m - k) as i64 {
        let mut per_point = Vec::with_capacity(divisor.len());
        for &(p, n_i) in divisor {
            let series = match p {
                CurvePoint::Affine(alpha) => {
                    let val = -(n_i as i64);
                    let rel = (top - val).max(1) as usize;
                    let mut s = shifted_variable(field, alpha, rel).pow(r as u64);
                    for &(beta, n_j) in &affine {
                        if beta != alpha {
                            let factor = shifted_variable(field, field.sub(alpha, beta), rel).pow(n_j as u64);
                            s = s.mul(&factor.inv()?)?;
                        }
                    }
                    LaurentSeries::new(field, val, s.coeffs().to_vec())
                }
                CurvePoint::Infinity => {
                    let val = affine_deg - r - 2;
                    let rel = (top - val).max(1) as usize;
                    let mut s = TruncatedSeries::constant(field, field.neg(Fq::ONE), rel);
                    for &(beta, n_j) in &affine {
                        // 1 - β u
                        let mut c = vec![Fq::ZERO; rel.max(2)];
                        c[0] = Fq::ONE;
                        c[1] = field.neg(beta);
                        c.truncate(rel);
                        let factor = TruncatedSeries::new(field, c)?.pow(n_j as u64);
                        s = s.mul(&factor.inv()?)?;
                    }
                    LaurentSeries::new(field, val, s.coeffs().to_vec())
                }
                CurvePoint::AffineE(..) => return Err(Error::Unsupported("elliptic point in a projective-line divisor".into())),
            };
            per_point.push(series);
        }
        out.push(per_point);
    }
    Ok(out)
}

/// Local differentials `η_ξ = u^(1-k) · h · (dx/y) / du` at `e` for `h` running
/// over the monomial basis of `H^0(O((n-k+1)e))`, certified below degree `top`.
pub fn elliptic_dual_differential_basis(field: &Field, curve: &CurveModel, k: usize, n: usize, top: i64) -> Result<Vec<LaurentSeries>> {
    let CurveModel::Elliptic { a, b } = *curve else {
        return Err(Error::Unsupported("elliptic dual basis on the projective line".into()));
    };
    curve.validate(field)?;
    let deg = n as i64 - k as i64 + 1;
    if deg < 0 {
        return Err(Error::NegativeDualDegree(format!("n - k + 1 = {}", deg)));
    }
    let h_basis = SectionBasis::new(curve, (deg + 1) as usize);
    let guard = top + 2 * (n as i64 + k as i64) + 16;
    let omega = invariant_differential_at_identity(field, a, b, guard.max(1) as usize)?;
    h_basis
        .monomials
        .iter()
        .map(|&h| {
            let hs = section_laurent_at(field, curve, h, &CurvePoint::Infinity, guard)?;
            hs.mul(&omega)?.shift(1 - k as i64).truncate_top(top)
        })
        .collect()
}

/// Coefficient series of `dx/y` in `du` at `e`, with `rel` certified terms.
pub fn invariant_differential_at_identity(field: &Field, a_coef: Fq, b_coef: Fq, rel: usize) -> Result<LaurentSeries> {
    let (x, y) = identity_expansions(field, a_coef, b_coef, rel + 2)?;
    x.derivative().div(&y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    fn ints(s: &TruncatedSeries) -> Vec<u64> {
        s.coeffs().iter().map(|c| c.index()).collect()
    }

    fn e511(f: &Field) -> CurveModel {
        CurveModel::elliptic(f, Fq::ONE, Fq::ONE).unwrap()
    }

    #[test]
    fn point_counts() {
        let f = f5();
        assert_eq!(rational_points(&CurveModel::ProjectiveLine, &f, 1 << 20).unwrap().len(), 6);
        assert_eq!(rational_points(&e511(&f), &f, 1 << 20).unwrap().len(), 9);
        let f2 = Field::prime(2).unwrap();
        assert!(matches!(CurveModel::elliptic(&f2, Fq::ONE, Fq::ONE), Err(Error::Unsupported(_))));
        assert_eq!(CurveModel::elliptic(&f, Fq::ZERO, Fq::ZERO).unwrap_err(), Error::SingularCurve);
    }

    #[test]
    fn hasse_weil_holds_for_small_curves() {
        for p in [5u64, 7, 11, 13] {
            let f = Field::prime(p).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let Ok(c) = CurveModel::elliptic(&f, a, b) else { continue };
                    let n = rational_points(&c, &f, 1 << 20).unwrap().len() as i64;
                    let dev = n - p as i64 - 1;
                    assert!(dev * dev <= 4 * p as i64, "p={} A={:?} B={:?} count {}", p, a, b, n);
                }
            }
        }
    }

    #[test]
    fn basis_sizes_follow_riemann_roch() {
        assert_eq!(SectionBasis::new(&CurveModel::ProjectiveLine, 4).len(), 4);
        let f = f5();
        let e = e511(&f);
        assert_eq!(SectionBasis::new(&e, 1).len(), 1);
        for k in 2..20 {
            assert_eq!(SectionBasis::new(&e, k).len(), k - 1);
        }
        assert_eq!(
            SectionBasis::new(&e, 6).monomials,
            vec![Monomial::X(0), Monomial::X(1), Monomial::X(2), Monomial::XY(0), Monomial::XY(1)]
        );
    }

    #[test]
    fn line_expansion_at_infinity() {
        let f = f5();
        let ex = expand_basis_at(&f, &CurveModel::ProjectiveLine, 3, &CurvePoint::Infinity, 3).unwrap();
        let got: Vec<Vec<u64>> = ex.iter().map(ints).collect();
        assert_eq!(got, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    }

    #[test]
    fn line_expansion_at_affine_point() {
        let f = f5();
        let ex = expand_basis_at(&f, &CurveModel::ProjectiveLine, 3, &CurvePoint::Affine(f.from_int(2)), 3).unwrap();
        assert_eq!(ints(&ex[2]), vec![4, 4, 1]);
        for (m, s) in ex.iter().enumerate() {
            for j in 0..=m {
                let expect = f.mul(f.binom(m as u64, j as u64), f.pow(f.from_int(2), (m - j) as u64));
                assert_eq!(s.coeff(j), expect);
            }
        }
    }

    #[test]
    fn y_expansion_example() {
        let f = f5();
        let y = y_expansion_affine(&f, Fq::ONE, Fq::ZERO, Fq::ONE, 3).unwrap();
        assert_eq!(ints(&y), vec![1, 3, 3]);
        assert!(matches!(y_expansion_affine(&f, Fq::ONE, Fq::ONE, Fq::ZERO, 3), Err(Error::TwoTorsionPoint(_))));
    }

    #[test]
    fn y_expansion_satisfies_curve_equation() {
        for p in [5u64, 7, 11] {
            let f = Field::prime(p).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let Ok(c) = CurveModel::elliptic(&f, a, b) else { continue };
                    for pt in rational_points(&c, &f, 1 << 20).unwrap() {
                        let CurvePoint::AffineE(alpha, beta) = pt else { continue };
                        if beta.is_zero() {
                            continue;
                        }
                        let n = 10;
                        let y = y_expansion_affine(&f, a, alpha, beta, n).unwrap();
                        let x = shifted_variable(&f, alpha, n);
                        let rhs = x.pow(3).add(&x.scale(a)).unwrap().add(&TruncatedSeries::constant(&f, b, n)).unwrap();
                        assert_eq!(y.mul(&y).unwrap(), rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn identity_expansions_satisfy_curve_equation() {
        for p in [5u64, 7, 13] {
            let f = Field::prime(p).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let Ok(_) = CurveModel::elliptic(&f, a, b) else { continue };
                    let (x, y) = identity_expansions(&f, a, b, 16).unwrap();
                    assert_eq!(x.coeff(-2).unwrap(), Fq::ONE);
                    assert_eq!(y.coeff(-3).unwrap(), f.neg(Fq::ONE));
                    let lhs = y.mul(&y).unwrap();
                    let mut bc = vec![Fq::ZERO; 40];
                    bc[0] = b;
                    let constant = LaurentSeries::new(&f, 0, bc);
                    let rhs = x.mul(&x).unwrap().mul(&x).unwrap().add(&x.scale(a)).unwrap().add(&constant).unwrap();
                    let diff = lhs.sub(&rhs).unwrap();
                    assert!(diff.is_zero(), "difference {:?}", diff);
                    assert!(diff.top() >= 9);
                    // u = -x/y
                    let u = x.div(&y).unwrap().neg();
                    assert_eq!(u.valuation(), Some(1));
                    assert_eq!(u.coeffs()[0], Fq::ONE);
                    assert!(u.coeffs()[1..].iter().all(|c| c.is_zero()));
                }
            }
        }
    }

    #[test]
    fn dual_basis_examples() {
        let f = f5();
        let d = [(CurvePoint::Affine(Fq::ZERO), 2)];
        let b = p1_dual_differential_basis(&f, 1, &d, 2).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0][0].valuation(), Some(-2));
        assert_eq!(b[0][0].coeff(-1).unwrap(), Fq::ZERO);
        assert_eq!(b[0][0].coeff(0).unwrap(), Fq::ZERO);

        let d = [(CurvePoint::Affine(Fq::ZERO), 1), (CurvePoint::Affine(Fq::ONE), 1)];
        let b = p1_dual_differential_basis(&f, 1, &d, 1).unwrap();
        assert_eq!(b[0][0].residue().unwrap(), f.from_int(4));
        assert_eq!(b[0][1].residue().unwrap(), Fq::ONE);

        let d = [(CurvePoint::Infinity, 3)];
        assert!(p1_dual_differential_basis(&f, 3, &d, 1).unwrap().is_empty());
        assert!(matches!(p1_dual_differential_basis(&f, 4, &d, 1), Err(Error::NegativeDualDegree(_))));
    }

    #[test]
    fn line_residues_sum_to_zero() {
        let f = Field::prime(7).unwrap();
        let d = [
            (CurvePoint::Affine(f.from_int(1)), 2),
            (CurvePoint::Affine(f.from_int(3)), 1),
            (CurvePoint::Affine(f.from_int(6)), 3),
        ];
        let all = [d.to_vec(), vec![(CurvePoint::Infinity, 1)]].concat();
        for k in 1..=6 {
            let b = p1_dual_differential_basis(&f, k, &all, 1).unwrap();
            for row in b {
                let s = row.iter().fold(Fq::ZERO, |acc, l| f.add(acc, l.residue().unwrap()));
                assert_eq!(s, Fq::ZERO);
            }
        }
    }

    #[test]
    fn elliptic_dual_basis_sizes() {
        let f = f5();
        let e = e511(&f);
        assert_eq!(elliptic_dual_differential_basis(&f, &e, 3, 3, 3).unwrap().len(), 1);
        assert_eq!(elliptic_dual_differential_basis(&f, &e, 2, 4, 4).unwrap().len(), 3);
        let omega = invariant_differential_at_identity(&f, Fq::ONE, Fq::ONE, 8).unwrap();
        assert_eq!(omega.valuation(), Some(0));
        assert_eq!(omega.coeffs()[0], f.from_int(2));
    }

    #[test]
    fn group_law_and_degree_zero_dimension() {
        let f = f5();
        let e = e511(&f);
        let pts = rational_points(&e, &f, 1 << 20).unwrap();
        // group of order 9: every point times 9 is the identity
        for &p in &pts {
            assert_eq!(elliptic_sum(&f, Fq::ONE, &[(p, 9)]).unwrap(), CurvePoint::Infinity);
        }
        let p = pts[1];
        let CurvePoint::AffineE(x, y) = p else { unreachable!() };
        let minus = CurvePoint::AffineE(x, f.neg(y));
        // L = O(2e), D = P + (-P): L(-D) is trivial
        assert_eq!(riemann_roch_dimension(&f, &e, 3, &[(p, 1), (minus, 1)]).unwrap(), 1);
        // D = 2P with 2P != 0: L(-D) has no sections
        assert_eq!(riemann_roch_dimension(&f, &e, 3, &[(p, 2)]).unwrap(), 2);
        assert_eq!(riemann_roch_dimension(&f, &e, 3, &[(CurvePoint::Infinity, 2)]).unwrap(), 1);
    }
}
