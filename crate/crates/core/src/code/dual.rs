//! Dual codes from residues of differentials, and a checker that compares
//! them with the linear-algebra dual.

use serde::Serialize;

use super::{build_code, h_dual_linear, h_pairing, CodeKind, CodeSpec, GoppaCode};
use crate::curve::{
    elliptic_dual_differential_basis, p1_dual_differential_basis, section_laurent_at, trivialization_shift, CurveModel, CurvePoint,
};
use crate::error::{Error, Result};
use crate::field::Fq;
use crate::matrix::{row_space_equal, FqMatrix};
use crate::series::LaurentSeries;

/// One dual differential at one divisor point.
struct LocalDifferential {
    /// Coefficients of `η` against `dt` in the canonical uniformizer.
    raw: LaurentSeries,
    /// `η` in the trivialization of the dual bundle matching the local data.
    xi: LaurentSeries,
}

fn local_differentials(spec: &CodeSpec) -> Result<Vec<Vec<LocalDifferential>>> {
    spec.validate()?;
    if spec.gamma.is_some() {
        return Err(Error::Unsupported("residue dual of a subcode given by gamma".into()));
    }
    if spec.local.iter().any(|ld| !ld.reparam.is_identity_reparam()) {
        return Err(Error::Unsupported("residue dual with a non-identity reparametrization".into()));
    }
    let f = &spec.field;
    let entries = spec.divisor.entries();
    let n_max = spec.divisor.max_multiplicity();
    let raws: Vec<Vec<LaurentSeries>> = match spec.curve {
        CurveModel::ProjectiveLine => p1_dual_differential_basis(f, spec.k, entries, (spec.k + n_max + 1) as i64)?,
        CurveModel::Elliptic { .. } => match entries {
            [(CurvePoint::Infinity, n)] => elliptic_dual_differential_basis(f, &spec.curve, spec.k, *n, 1)?
                .into_iter()
                .map(|e| vec![e.shift(spec.k as i64 - 1)])
                .collect(),
            _ => return Err(Error::Unsupported("elliptic residue dual needs a divisor supported at the origin".into())),
        },
    };
    raws.into_iter()
        .map(|per_point| {
            per_point
                .into_iter()
                .zip(entries.iter().zip(&spec.local))
                .map(|(raw, (&(p, n), ld))| {
                    let unit_inv = ld.unit.truncate(n)?.inv()?.to_laurent();
                    let xi = raw.shift(-trivialization_shift(spec.k, &p)).mul(&unit_inv)?;
                    Ok(LocalDifferential { raw, xi })
                })
                .collect()
        })
        .collect()
}

/// Codeword of each differential: block `i`, coordinate `j` is `Res(t^(n_i-1-j) η_ξ)`.
fn residue_rows(spec: &CodeSpec, locals: &[Vec<LocalDifferential>]) -> Result<FqMatrix> {
    let entries = spec.divisor.entries();
    let rows = locals
        .iter()
        .map(|per_point| {
            let mut row = Vec::with_capacity(spec.divisor.degree());
            for (loc, &(_, n)) in per_point.iter().zip(entries) {
                for j in 0..n {
                    row.push(loc.xi.coeff(j as i64 - n as i64)?);
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    FqMatrix::from_rows(&spec.field, rows, spec.divisor.degree())
}

/// The dual code spanned by residue codewords of differentials with poles
/// bounded by `D`. Supported on the projective line and, on an elliptic
/// curve, for divisors `n·O`.
pub fn dual_code_residue(spec: &CodeSpec) -> Result<GoppaCode> {
    let locals = local_differentials(spec)?;
    let all = residue_rows(spec, &locals)?;
    let generator = all.select_rows(&all.independent_rows());
    Ok(GoppaCode { generator, blocks: spec.divisor.multiplicities(), spec: spec.clone(), kind: CodeKind::ResidueDual })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityCheck {
    pub name: &'static str,
    pub description: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub length: usize,
    pub primal_dimension: usize,
    pub dual_dimension: usize,
    pub checks: Vec<DualityCheck>,
}

impl DualityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &'static str, description: &'static str, witness: Option<String>) -> DualityCheck {
    DualityCheck { name, description, passed: witness.is_none(), witness }
}

/// Compares the residue dual with the primal code: orthogonality, equality
/// with the linear dual, dimension, the local convolution identity and the
/// residue theorem.
pub fn verify_duality(spec: &CodeSpec) -> Result<DualityReport> {
    let f = &spec.field;
    let primal = build_code(spec)?;
    let locals = local_differentials(spec)?;
    let all = residue_rows(spec, &locals)?;
    let dual = all.select_rows(&all.independent_rows());
    let m = spec.divisor.degree();
    let blocks = spec.divisor.multiplicities();
    let mut checks = Vec::new();

    let mut w = None;
    'outer: for i in 0..primal.generator.rows() {
        for j in 0..dual.rows() {
            let v = h_pairing(f, primal.generator.row(i), dual.row(j), &blocks)?;
            if !v.is_zero() {
                w = Some(format!("primal row {} and dual row {} pair to {}", i, j, f.format(v)));
                break 'outer;
            }
        }
    }
    checks.push(check("orthogonality", "every primal and dual row pair to zero", w));

    let linear = h_dual_linear(&primal);
    let w = (!row_space_equal(&dual, &linear)?).then(|| format!("residue dual rank {}, linear dual rank {}", dual.rank(), linear.rank()));
    checks.push(check("row-space", "residue dual equals the linear dual", w));

    let (pd, dd) = (primal.dimension(), dual.rank());
    let w = (pd + dd != m).then(|| format!("{} + {} != {}", pd, dd, m));
    checks.push(check("dimension", "dual dimension is M minus the primal dimension", w));

    let basis = spec.basis();
    let top_s = (spec.divisor.max_multiplicity() + 2) as i64;
    let mut conv = None;
    let mut sum = None;
    for (l, &mono) in basis.monomials.iter().enumerate() {
        for (r, per_point) in locals.iter().enumerate() {
            let mut total = Fq::ZERO;
            let mut off = 0;
            for (loc, &(p, n)) in per_point.iter().zip(spec.divisor.entries()) {
                let s = section_laurent_at(f, &spec.curve, mono, &p, top_s)?;
                let lhs = s.mul(&loc.raw)?.residue()?;
                let mut rhs = Fq::ZERO;
                for j in 0..n {
                    rhs = f.add(rhs, f.mul(primal.generator.get(l, off + j), all.get(r, off + n - 1 - j)));
                }
                if lhs != rhs && conv.is_none() {
                    conv = Some(format!("section {} with differential {} at {}: {} vs {}", mono, r, p, f.format(lhs), f.format(rhs)));
                }
                total = f.add(total, lhs);
                off += n;
            }
            if !total.is_zero() && sum.is_none() {
                sum = Some(format!("section {} with differential {}: residues sum to {}", mono, r, f.format(total)));
            }
        }
    }
    checks.push(check("convolution", "local residues match the coordinate convolution", conv));
    checks.push(check("residue-sum", "residues of each product sum to zero", sum));

    Ok(DualityReport { length: m, primal_dimension: pd, dual_dimension: dd, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{Divisor, LocalData};
    use crate::field::Field;
    use crate::series::TruncatedSeries;

    fn spec(f: &Field, curve: CurveModel, k: usize, d: Vec<(CurvePoint, usize)>) -> CodeSpec {
        CodeSpec::new(f, curve, k, Divisor::new(d).unwrap())
    }

    #[test]
    fn projective_line_duality() {
        let f = Field::prime(5).unwrap();
        let d = vec![
            (CurvePoint::Affine(Fq::ZERO), 2),
            (CurvePoint::Affine(f.from_int(3)), 1),
            (CurvePoint::Infinity, 3),
        ];
        for k in 1..=6 {
            let r = verify_duality(&spec(&f, CurveModel::ProjectiveLine, k, d.clone())).unwrap();
            assert!(r.all_passed(), "k = {}: {:?}", k, r);
            assert_eq!(r.dual_dimension, 6 - k);
        }
    }

    #[test]
    fn duality_with_nontrivial_units() {
        let f = Field::prime(7).unwrap();
        let mut s = spec(&f, CurveModel::ProjectiveLine, 3, vec![(CurvePoint::Affine(f.from_int(2)), 3), (CurvePoint::Infinity, 3)]);
        s.local[0] = LocalData { unit: TruncatedSeries::from_ints(&f, &[3, 1, 5]).unwrap(), reparam: TruncatedSeries::variable(&f, 3) };
        s.local[1].unit = TruncatedSeries::from_ints(&f, &[1, 0, 2]).unwrap();
        assert!(verify_duality(&s).unwrap().all_passed());
    }

    #[test]
    fn elliptic_one_point_duality() {
        let f = Field::prime(5).unwrap();
        let e = CurveModel::elliptic(&f, Fq::ONE, Fq::ONE).unwrap();
        for k in 1..=5 {
            let r = verify_duality(&spec(&f, e, k, vec![(CurvePoint::Infinity, 5)])).unwrap();
            assert!(r.all_passed(), "k = {}: {:?}", k, r);
        }
    }

    #[test]
    fn unsupported_cases() {
        let f = Field::prime(5).unwrap();
        let mut s = spec(&f, CurveModel::ProjectiveLine, 2, vec![(CurvePoint::Infinity, 3)]);
        s.local[0].reparam = TruncatedSeries::from_ints(&f, &[0, 2, 1]).unwrap();
        assert!(matches!(dual_code_residue(&s), Err(Error::Unsupported(_))));
        let s = spec(&f, CurveModel::ProjectiveLine, 4, vec![(CurvePoint::Infinity, 3)]);
        assert!(matches!(dual_code_residue(&s), Err(Error::NegativeDualDegree(_))));
    }
}
