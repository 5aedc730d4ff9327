//! Differential Goppa codes: construction from a [`CodeSpec`], weights and
//! minimum distances, the block-reversed pairing and the linear-algebra dual.
//!
//! Column blocks follow the divisor order; inside block `i`, column `j`
//! carries derivative order `j` at point `i`.

mod dual;

pub use dual::{dual_code_residue, verify_duality, DualityCheck, DualityReport};

use serde::Serialize;

use crate::curve::{expand_basis_at, riemann_roch_dimension, CurveModel, CurvePoint, SectionBasis};
use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::matrix::{all_column_subsets_full_rank, FqMatrix};
use crate::series::{check_reparam, TruncatedSeries};

/// Default cap on enumerated codewords or column subsets.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// An effective divisor `Σ n_i p_i` with distinct rational points, kept in
/// the order given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    entries: Vec<(CurvePoint, usize)>,
}

impl Divisor {
    pub fn new(entries: Vec<(CurvePoint, usize)>) -> Result<Divisor> {
        if entries.is_empty() {
            return Err(Error::InvalidSpec("divisor has no points".into()));
        }
        for (i, (p, n)) in entries.iter().enumerate() {
            if *n == 0 {
                return Err(Error::InvalidSpec(format!("point {} has multiplicity 0", p)));
            }
            if entries[..i].iter().any(|(q, _)| q == p) {
                return Err(Error::InvalidSpec(format!("point {} appears twice", p)));
            }
        }
        Ok(Divisor { entries })
    }

    pub fn entries(&self) -> &[(CurvePoint, usize)] {
        &self.entries
    }

    /// Block sizes `n_1..n_s`.
    pub fn multiplicities(&self) -> Vec<usize> {
        self.entries.iter().map(|&(_, n)| n).collect()
    }

    /// `M = Σ n_i`.
    pub fn degree(&self) -> usize {
        self.entries.iter().map(|&(_, n)| n).sum()
    }

    /// `n = max n_i`.
    pub fn max_multiplicity(&self) -> usize {
        self.entries.iter().map(|&(_, n)| n).max().unwrap_or(0)
    }

    /// Number of blocks `s`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Local data at one divisor point, relative to the canonical choice: the
/// trivialization is multiplied by `unit` and then `reparam` is substituted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalData {
    pub unit: TruncatedSeries,
    pub reparam: TruncatedSeries,
}

impl LocalData {
    /// Unit `1` and reparametrization `t` for a block of size `n`.
    pub fn identity(field: &Field, n: usize) -> LocalData {
        LocalData { unit: TruncatedSeries::one(field, n), reparam: TruncatedSeries::variable(field, n) }
    }

    pub fn is_identity(&self) -> bool {
        self.unit.coeff(0) == Fq::ONE && self.unit.coeffs()[1..].iter().all(|c| c.is_zero()) && self.reparam.is_identity_reparam()
    }
}

/// Everything needed to build a code: field, curve, bundle parameter `k`
/// (`L = O((k-1)·P0)`), divisor, local data per point and an optional
/// subspace `Γ` of sections given in the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    pub field: Field,
    pub curve: CurveModel,
    pub k: usize,
    pub divisor: Divisor,
    pub local: Vec<LocalData>,
    pub gamma: Option<FqMatrix>,
}

impl CodeSpec {
    /// A spec with canonical local data and the full space of sections.
    pub fn new(field: &Field, curve: CurveModel, k: usize, divisor: Divisor) -> CodeSpec {
        let local = divisor.entries().iter().map(|&(_, n)| LocalData::identity(field, n)).collect();
        CodeSpec { field: field.clone(), curve, k, divisor, local, gamma: None }
    }

    pub fn basis(&self) -> SectionBasis {
        SectionBasis::new(&self.curve, self.k)
    }

    pub fn validate(&self) -> Result<()> {
        let f = &self.field;
        self.curve.validate(f)?;
        if self.k == 0 {
            return Err(Error::InvalidSpec("bundle parameter k must be at least 1".into()));
        }
        for &(p, _) in self.divisor.entries() {
            self.curve.validate_point(f, &p)?;
            if let CurvePoint::AffineE(alpha, beta) = p {
                if beta.is_zero() {
                    return Err(Error::TwoTorsionPoint(f.format(alpha)));
                }
            }
        }
        if self.local.len() != self.divisor.len() {
            return Err(Error::InvalidSpec(format!(
                "{} local data entries for {} divisor points",
                self.local.len(),
                self.divisor.len()
            )));
        }
        for (ld, &(p, n)) in self.local.iter().zip(self.divisor.entries()) {
            f.ensure_same(ld.unit.field())?;
            f.ensure_same(ld.reparam.field())?;
            if ld.unit.precision() < n || ld.reparam.precision() < n {
                return Err(Error::InvalidSpec(format!("local data at {} has precision below the multiplicity {}", p, n)));
            }
            if !ld.unit.is_unit() {
                return Err(Error::NotAUnit);
            }
            check_reparam(&ld.reparam)?;
        }
        if let Some(g) = &self.gamma {
            f.ensure_same(g.field())?;
            let b = self.basis().len();
            if g.cols() != b {
                return Err(Error::InvalidSpec(format!("gamma has {} columns but the basis has {} sections", g.cols(), b)));
            }
            if g.rank() != g.rows() {
                return Err(Error::InvalidSpec("gamma rows are linearly dependent".into()));
            }
        }
        Ok(())
    }

    /// `ℓ(L) - ℓ(L(-D))`, the dimension of the code on the full space of sections.
    pub fn expected_dimension(&self) -> Result<usize> {
        riemann_roch_dimension(&self.field, &self.curve, self.k, self.divisor.entries())
    }
}

/// How a [`GoppaCode`] was obtained from its spec.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeKind {
    Primal,
    ResidueDual,
    TaylorImage,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoppaCode {
    pub generator: FqMatrix,
    pub blocks: Vec<usize>,
    pub spec: CodeSpec,
    pub kind: CodeKind,
}

impl GoppaCode {
    pub fn field(&self) -> &Field {
        self.generator.field()
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rank()
    }
}

/// Generator rows for every basis section, before `Γ` is applied.
pub fn section_generator(spec: &CodeSpec) -> Result<FqMatrix> {
    let f = &spec.field;
    let basis = spec.basis();
    let m = spec.divisor.degree();
    let mut g = FqMatrix::zeros(f, basis.len(), m);
    let mut col = 0;
    for (&(p, n), ld) in spec.divisor.entries().iter().zip(&spec.local) {
        let expansions = expand_basis_at(f, &spec.curve, spec.k, &p, n)?;
        let unit = ld.unit.truncate(n)?;
        for (row, e) in expansions.iter().enumerate() {
            let block = e.mul(&unit)?.compose(&ld.reparam)?;
            for j in 0..n {
                g.set(row, col + j, block.coeff(j));
            }
        }
        col += n;
    }
    Ok(g)
}

/// Builds the generator matrix, checking the rank against Riemann–Roch when
/// the full space of sections is used.
pub fn build_code(spec: &CodeSpec) -> Result<GoppaCode> {
    spec.validate()?;
    let full = section_generator(spec)?;
    let generator = match &spec.gamma {
        Some(gamma) => gamma.mul(&full)?,
        None => {
            let expected = spec.expected_dimension()?;
            let actual = full.rank();
            if actual != expected {
                return Err(Error::RankDeficiency { expected, actual });
            }
            full
        }
    };
    Ok(GoppaCode { generator, blocks: spec.divisor.multiplicities(), spec: spec.clone(), kind: CodeKind::Primal })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Hamming,
    Block,
    Rt,
    Rank,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Metric> {
        match s {
            "hamming" => Ok(Metric::Hamming),
            "block" => Ok(Metric::Block),
            "rt" => Ok(Metric::Rt),
            "rank" => Ok(Metric::Rank),
            _ => Err(Error::Parse(format!("unknown metric {:?}", s))),
        }
    }
}

fn check_blocks(len: usize, blocks: &[usize]) -> Result<()> {
    if blocks.iter().sum::<usize>() != len {
        return Err(Error::BlockMismatch);
    }
    Ok(())
}

/// Rosenbloom–Tsfasman weight of one block: the number of positions from the
/// first nonzero coordinate to the end of the block (0 for the zero block).
pub fn rt_block_weight(block: &[Fq]) -> usize {
    block.iter().position(|c| !c.is_zero()).map_or(0, |m| block.len() - m)
}

/// Weight of a block-structured word.
pub fn weight(field: &Field, word: &[Fq], blocks: &[usize], metric: Metric) -> Result<usize> {
    check_blocks(word.len(), blocks)?;
    let mut off = 0;
    let pieces: Vec<&[Fq]> = blocks
        .iter()
        .map(|&n| {
            let b = &word[off..off + n];
            off += n;
            b
        })
        .collect();
    Ok(match metric {
        Metric::Hamming => word.iter().filter(|c| !c.is_zero()).count(),
        Metric::Block => pieces.iter().filter(|b| b.iter().any(|c| !c.is_zero())).count(),
        Metric::Rt => pieces.iter().map(|b| rt_block_weight(b)).sum(),
        Metric::Rank => {
            let n = blocks[0];
            if blocks.iter().any(|&b| b != n) {
                return Err(Error::NonUniformBlocks);
            }
            FqMatrix::from_rows(field, pieces.iter().map(|b| b.to_vec()).collect(), n)?.rank()
        }
    })
}

/// Visits every nonzero codeword spanned by the rows of `basis` (assumed
/// independent) in odometer order over coefficient indices. The visitor
/// returns `false` to stop early. Returns the number of codewords visited.
pub fn for_each_codeword<F: FnMut(&[Fq], &[Fq]) -> bool>(basis: &FqMatrix, budget: u128, mut visit: F) -> Result<u128> {
    let f = basis.field();
    let k = basis.rows();
    let m = basis.cols();
    let q = f.order() as u128;
    let total = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(q)).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded { needed: total, budget, bounds: None });
    }
    if k == 0 {
        return Ok(0);
    }
    let elems: Vec<Fq> = f.elements().collect();
    let scaled: Vec<Vec<Vec<Fq>>> = (0..k)
        .map(|i| elems.iter().map(|&c| basis.row(i).iter().map(|&x| f.mul(c, x)).collect()).collect())
        .collect();
    let mut digits = vec![0usize; k];
    let mut coeffs = vec![Fq::ZERO; k];
    // partial[d] = Σ_{i<d} digits[i]·row_i
    let mut partial = vec![vec![Fq::ZERO; m]; k + 1];
    let mut visited = 0u128;
    loop {
        // advance the odometer
        let mut d = k;
        loop {
            if d == 0 {
                return Ok(visited);
            }
            d -= 1;
            digits[d] += 1;
            if digits[d] < elems.len() {
                break;
            }
            digits[d] = 0;
        }
        for i in d..k {
            coeffs[i] = elems[digits[i]];
            let (lo, hi) = partial.split_at_mut(i + 1);
            for ((out, &a), &b) in hi[0].iter_mut().zip(&lo[i]).zip(&scaled[i][digits[i]]) {
                *out = f.add(a, b);
            }
        }
        visited += 1;
        if !visit(&partial[k], &coeffs) {
            return Ok(visited);
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMethod {
    Exhaustive,
    MinorCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub metric: Metric,
    pub value: usize,
    pub method: DistanceMethod,
    /// Codewords or column subsets examined.
    pub enumerated: u128,
    /// A codeword attaining the minimum (exhaustive mode only).
    #[serde(skip)]
    pub witness: Option<Vec<Fq>>,
}

/// Minimum weight of a nonzero codeword (0 for the zero code).
pub fn min_distance(code: &GoppaCode, metric: Metric, method: DistanceMethod, budget: u128) -> Result<DistanceReport> {
    let f = code.field();
    let basis = code.generator.row_basis();
    match method {
        DistanceMethod::Exhaustive => {
            if metric == Metric::Rank {
                weight(f, &vec![Fq::ZERO; code.length()], &code.blocks, Metric::Rank)?;
            }
            let mut best: Option<(usize, Vec<Fq>)> = None;
            let res = for_each_codeword(&basis, budget, |c, _| {
                let w = weight(f, c, &code.blocks, metric).expect("blocks checked");
                if best.as_ref().is_none_or(|(b, _)| w < *b) {
                    best = Some((w, c.to_vec()));
                }
                w > 1
            });
            let enumerated = match res {
                Ok(n) => n,
                Err(Error::BudgetExceeded { needed, budget, .. }) => {
                    let upper = (0..basis.rows()).map(|i| weight(f, basis.row(i), &code.blocks, metric)).collect::<Result<Vec<_>>>()?;
                    let upper = upper.into_iter().min().unwrap_or(0);
                    return Err(Error::BudgetExceeded { needed, budget, bounds: Some((usize::from(upper > 0), upper)) });
                }
                Err(e) => return Err(e),
            };
            let (value, witness) = best.map_or((0, None), |(w, c)| (w, Some(c)));
            Ok(DistanceReport { metric, value, method, enumerated, witness })
        }
        DistanceMethod::MinorCertificate => {
            if metric != Metric::Hamming {
                return Err(Error::Unsupported("minor certificates apply to the Hamming metric only".into()));
            }
            let (k, m) = (basis.rows(), basis.cols());
            if k == 0 {
                return Ok(DistanceReport { metric, value: 0, method, enumerated: 0, witness: None });
            }
            let mut enumerated = 0u128;
            for d in (1..=m - k + 1).rev() {
                let chk = all_column_subsets_full_rank(&basis, m - d + 1, budget.saturating_sub(enumerated))?;
                enumerated += chk.subsets_checked;
                if chk.full_rank {
                    return Ok(DistanceReport { metric, value: d, method, enumerated, witness: None });
                }
            }
            unreachable!("all M columns of a full-rank generator have rank k")
        }
    }
}

/// `⟨c, c'⟩_H = Σ_i Σ_j c_{i,j} c'_{i,n_i-1-j}`.
pub fn h_pairing(field: &Field, c: &[Fq], c2: &[Fq], blocks: &[usize]) -> Result<Fq> {
    if c.len() != c2.len() {
        return Err(Error::BlockMismatch);
    }
    check_blocks(c.len(), blocks)?;
    let mut acc = Fq::ZERO;
    let mut off = 0;
    for &n in blocks {
        for j in 0..n {
            acc = field.add(acc, field.mul(c[off + j], c2[off + n - 1 - j]));
        }
        off += n;
    }
    Ok(acc)
}

/// Reverses the coordinates inside every block.
pub fn reverse_blocks(word: &[Fq], blocks: &[usize]) -> Vec<Fq> {
    let mut out = Vec::with_capacity(word.len());
    let mut off = 0;
    for &n in blocks {
        out.extend(word[off..off + n].iter().rev());
        off += n;
    }
    out
}

/// Basis of the dual under the block-reversed pairing: the kernel of `G`
/// with each block reversed.
pub fn h_dual_linear(code: &GoppaCode) -> FqMatrix {
    let k = code.generator.kernel_basis();
    let rows = (0..k.rows()).map(|i| reverse_blocks(k.row(i), &code.blocks)).collect();
    FqMatrix::from_rows(code.field(), rows, code.length()).expect("widths agree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    fn p1(f: &Field, k: usize, d: Vec<(CurvePoint, usize)>) -> CodeSpec {
        CodeSpec::new(f, CurveModel::ProjectiveLine, k, Divisor::new(d).unwrap())
    }

    fn mat(f: &Field, rows: &[&[i64]]) -> FqMatrix {
        FqMatrix::from_int_rows(f, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn one_point_code_is_antidiagonal() {
        let f = f5();
        let c = build_code(&p1(&f, 3, vec![(CurvePoint::Infinity, 3)])).unwrap();
        assert_eq!(c.generator, mat(&f, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
    }

    #[test]
    fn affine_point_code_is_pascal() {
        let f = f5();
        let c = build_code(&p1(&f, 3, vec![(CurvePoint::Affine(f.from_int(2)), 3)])).unwrap();
        assert_eq!(c.generator, mat(&f, &[&[1, 0, 0], &[2, 1, 0], &[4, 4, 1]]));
    }

    #[test]
    fn constant_section_evaluates_to_one() {
        let f = f5();
        let c = build_code(&p1(&f, 1, vec![(CurvePoint::Affine(Fq::ZERO), 1), (CurvePoint::Affine(Fq::ONE), 1)])).unwrap();
        assert_eq!(c.generator, mat(&f, &[&[1, 1]]));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let f = f5();
        assert!(Divisor::new(vec![(CurvePoint::Infinity, 1), (CurvePoint::Infinity, 2)]).is_err());
        assert!(Divisor::new(vec![(CurvePoint::Infinity, 0)]).is_err());
        let mut s = p1(&f, 2, vec![(CurvePoint::Infinity, 2)]);
        s.local[0].unit = TruncatedSeries::from_ints(&f, &[0, 1]).unwrap();
        assert_eq!(build_code(&s).unwrap_err(), Error::NotAUnit);
        let e = CurveModel::elliptic(&f, Fq::ONE, Fq::ONE).unwrap();
        let bad = CodeSpec::new(&f, e, 3, Divisor::new(vec![(CurvePoint::AffineE(Fq::ZERO, Fq::ZERO), 1)]).unwrap());
        assert!(matches!(build_code(&bad), Err(Error::PointNotOnCurve(_))));
    }

    #[test]
    fn weight_examples() {
        let f = f5();
        let z = vec![Fq::ZERO; 6];
        for m in [Metric::Hamming, Metric::Block, Metric::Rt, Metric::Rank] {
            assert_eq!(weight(&f, &z, &[2, 2, 2], m).unwrap(), 0);
        }
        let w: Vec<Fq> = [1, 0, 0, 0, 0, 3].iter().map(|&x| f.from_int(x)).collect();
        assert_eq!(weight(&f, &w, &[2, 2, 2], Metric::Hamming).unwrap(), 2);
        assert_eq!(weight(&f, &w, &[2, 2, 2], Metric::Block).unwrap(), 2);
        assert_eq!(weight(&f, &w, &[2, 2, 2], Metric::Rt).unwrap(), 3);
        let r: Vec<Fq> = [1, 0, 2, 0].iter().map(|&x| f.from_int(x)).collect();
        assert_eq!(weight(&f, &r, &[2, 2], Metric::Rank).unwrap(), 1);
        assert_eq!(weight(&f, &r, &[1, 3], Metric::Rank).unwrap_err(), Error::NonUniformBlocks);
        assert_eq!(weight(&f, &r, &[1, 2], Metric::Hamming).unwrap_err(), Error::BlockMismatch);
    }

    #[test]
    fn rt_weight_counts_from_first_nonzero() {
        let f = f5();
        let b: Vec<Fq> = [0, 2, 0, 1].iter().map(|&x| f.from_int(x)).collect();
        assert_eq!(rt_block_weight(&b), 3);
        assert_eq!(rt_block_weight(&[Fq::ZERO; 3]), 0);
        assert_eq!(rt_block_weight(&[Fq::ZERO, Fq::ZERO, Fq::ONE]), 1);
    }

    #[test]
    fn full_space_has_distance_one() {
        let f = f5();
        let c = build_code(&p1(&f, 3, vec![(CurvePoint::Infinity, 3)])).unwrap();
        let r = min_distance(&c, Metric::Hamming, DistanceMethod::Exhaustive, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.value, 1);
    }

    #[test]
    fn reed_solomon_distance() {
        let f = f5();
        let d = (1..5).map(|a| (CurvePoint::Affine(f.from_int(a)), 1)).collect();
        let c = build_code(&p1(&f, 2, d)).unwrap();
        let r = min_distance(&c, Metric::Hamming, DistanceMethod::Exhaustive, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.value, 3);
        assert_eq!(r.enumerated, 24);
        let m = min_distance(&c, Metric::Hamming, DistanceMethod::MinorCertificate, DEFAULT_BUDGET).unwrap();
        assert_eq!(m.value, 3);
    }

    #[test]
    fn budget_exceeded_reports_bounds() {
        let f = Field::prime(7).unwrap();
        let d = (0..7).map(|a| (CurvePoint::Affine(f.from_int(a)), 1)).collect();
        let c = build_code(&p1(&f, 4, d)).unwrap();
        match min_distance(&c, Metric::Hamming, DistanceMethod::Exhaustive, 100) {
            Err(Error::BudgetExceeded { needed: 2401, budget: 100, bounds: Some((1, u)) }) => assert!(u >= 4),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn pairing_examples() {
        let f = f5();
        let e0 = [Fq::ONE, Fq::ZERO];
        assert_eq!(h_pairing(&f, &e0, &e0, &[2]).unwrap(), Fq::ZERO);
        let ab = [f.from_int(2), f.from_int(3)];
        let xy = [f.from_int(4), f.from_int(1)];
        // a·y + b·x = 2 + 12 = 14 = 4
        assert_eq!(h_pairing(&f, &ab, &xy, &[2]).unwrap(), f.from_int(4));
        assert_eq!(h_pairing(&f, &ab, &[Fq::ZERO; 2], &[2]).unwrap(), Fq::ZERO);
        assert_eq!(h_pairing(&f, &ab, &xy, &[1]).unwrap_err(), Error::BlockMismatch);
    }

    #[test]
    fn linear_dual_examples() {
        let f = f5();
        let full = build_code(&p1(&f, 3, vec![(CurvePoint::Infinity, 3)])).unwrap();
        assert_eq!(h_dual_linear(&full).rows(), 0);
        let c = build_code(&p1(&f, 1, vec![(CurvePoint::Affine(Fq::ZERO), 2)])).unwrap();
        assert_eq!(c.generator, mat(&f, &[&[1, 0]]));
        assert_eq!(h_dual_linear(&c), mat(&f, &[&[1, 0]]));
    }

    #[test]
    fn elliptic_codes_have_riemann_roch_rank() {
        let f = Field::prime(7).unwrap();
        let e = CurveModel::elliptic(&f, f.from_int(3), f.from_int(2)).unwrap();
        let pts = crate::curve::rational_points(&e, &f, 1 << 20).unwrap();
        let affine: Vec<CurvePoint> = pts.into_iter().filter(|p| matches!(p, CurvePoint::AffineE(_, b) if !b.is_zero())).collect();
        for k in 1..=7 {
            let d = Divisor::new(vec![(CurvePoint::Infinity, 2), (affine[0], 2), (affine[1], 1)]).unwrap();
            let c = build_code(&CodeSpec::new(&f, e, k, d)).unwrap();
            assert_eq!(c.dimension(), if k == 1 { 1 } else { (k - 1).min(5) });
        }
    }
}
