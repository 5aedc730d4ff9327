//! Constructions on top of the code builder: sparsifying units, reaching the
//! block distance, randomized unit search, realizing arbitrary linear codes,
//! the strong-code obstruction and two named genus-0 families.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::code::{build_code, for_each_codeword, min_distance, CodeSpec, DistanceMethod, DistanceReport, Divisor, GoppaCode, Metric};
use crate::curve::{CurveModel, CurvePoint};
use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::matrix::{all_column_subsets_full_rank, binomial_u128, FqMatrix};
use crate::series::TruncatedSeries;
use crate::taylor::random_unit_coeffs;

/// Default seed for randomized searches.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Unit `f` with `f·v ≡ t^m (mod t^n)`, where `m` is the index of the first
/// nonzero entry of `v`.
pub fn sparsify_local(field: &Field, v: &[Fq]) -> Result<TruncatedSeries> {
    let m = v.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
    let tail = TruncatedSeries::new(field, v[m..].to_vec())?;
    Ok(tail.inv()?.pad(v.len()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCertificate {
    /// Codeword of minimal block weight in the original code.
    pub codeword: Vec<Fq>,
    pub block_distance: usize,
    pub hamming_before: usize,
    pub hamming_after: usize,
}

impl BlockCertificate {
    pub fn holds(&self) -> bool {
        self.hamming_after == self.block_distance
    }
}

/// Rewrites the units at the support of a minimal block-weight codeword so
/// that each of its nonzero blocks becomes a single unit vector. The rebuilt
/// code then has Hamming distance equal to its block distance.
pub fn achieve_block_distance(spec: &CodeSpec, budget: u128) -> Result<(CodeSpec, BlockCertificate)> {
    let code = build_code(spec)?;
    let before = min_distance(&code, Metric::Hamming, DistanceMethod::Exhaustive, budget)?;
    let blk = min_distance(&code, Metric::Block, DistanceMethod::Exhaustive, budget)?;
    let Some(codeword) = blk.witness.clone() else {
        return Err(Error::InvalidSpec("the code is zero".into()));
    };
    let f = &spec.field;
    let mut new_spec = spec.clone();
    let mut off = 0;
    for (ld, &(_, n)) in new_spec.local.iter_mut().zip(spec.divisor.entries()) {
        let block = &codeword[off..off + n];
        off += n;
        if block.iter().all(|c| c.is_zero()) {
            continue;
        }
        // the block is (s·u)∘σ; multiplying it by g means replacing u by u·(g∘σ⁻¹)
        let g = sparsify_local(f, block)?;
        let sigma_inv = ld.reparam.truncate(n)?.reversion()?;
        ld.unit = ld.unit.truncate(n)?.mul(&g.compose(&sigma_inv)?)?;
    }
    let rebuilt = build_code(&new_spec)?;
    let after = min_distance(&rebuilt, Metric::Hamming, DistanceMethod::Exhaustive, budget)?;
    let cert = BlockCertificate { codeword, block_distance: blk.value, hamming_before: before.value, hamming_after: after.value };
    Ok((new_spec, cert))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub target_distance: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: DistanceMethod,
    pub budget: u128,
}

impl SearchConfig {
    pub fn new(target_distance: usize) -> SearchConfig {
        SearchConfig { target_distance, trials: 100, seed: DEFAULT_SEED, mode: DistanceMethod::Exhaustive, budget: crate::code::DEFAULT_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub seed: u64,
    pub target_distance: usize,
    pub trials_run: usize,
    /// `k · C(M, d-1)`.
    pub delta_bound: u128,
    pub q_exceeds_delta: bool,
    pub success: bool,
    pub winning_trial: Option<usize>,
    pub units: Option<Vec<TruncatedSeries>>,
    pub distance: Option<DistanceReport>,
}

/// Whether every nonzero codeword has Hamming weight at least `d`.
pub fn certify_hamming_distance(code: &GoppaCode, d: usize, mode: DistanceMethod, budget: u128) -> Result<bool> {
    let basis = code.generator.row_basis();
    let (k, m) = (basis.rows(), basis.cols());
    if k == 0 {
        return Ok(false);
    }
    if d <= 1 {
        return Ok(true);
    }
    if d > m - k + 1 {
        return Ok(false);
    }
    match mode {
        DistanceMethod::Exhaustive => {
            let mut ok = true;
            for_each_codeword(&basis, budget, |c, _| {
                ok = c.iter().filter(|x| !x.is_zero()).count() >= d;
                ok
            })?;
            Ok(ok)
        }
        DistanceMethod::MinorCertificate => Ok(all_column_subsets_full_rank(&basis, m - d + 1, budget)?.full_rank),
    }
}

/// Randomized search over units (reparametrizations kept) for a code of
/// Hamming distance at least the target. Trial 0 keeps the spec's units.
pub fn search_parameters(spec: &CodeSpec, config: &SearchConfig) -> Result<SearchReport> {
    let code = build_code(spec)?;
    let k = code.dimension();
    let m = code.length();
    let d = config.target_distance;
    if d == 0 || k == 0 || d > m + 1 - k {
        return Err(Error::InvalidTarget(format!("distance {} outside 1..={} for an [{}, {}] code", d, (m + 1).saturating_sub(k), m, k)));
    }
    let delta_bound = (k as u128).saturating_mul(binomial_u128(m as u64, (d - 1) as u64));
    let q = spec.field.order() as u128;
    let mut report = SearchReport {
        seed: config.seed,
        target_distance: d,
        trials_run: 0,
        delta_bound,
        q_exceeds_delta: q > delta_bound,
        success: false,
        winning_trial: None,
        units: None,
        distance: None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut trial_spec = spec.clone();
    for trial in 0..config.trials {
        if trial > 0 {
            for (ld, &(_, n)) in trial_spec.local.iter_mut().zip(spec.divisor.entries()) {
                ld.unit = TruncatedSeries::new(&spec.field, random_unit_coeffs(&spec.field, n, &mut rng))?;
            }
        }
        report.trials_run = trial + 1;
        let candidate = if trial == 0 { code.clone() } else { build_code(&trial_spec)? };
        if certify_hamming_distance(&candidate, d, config.mode, config.budget)? {
            report.success = true;
            report.winning_trial = Some(trial);
            report.units = Some(trial_spec.local.iter().map(|ld| ld.unit.clone()).collect());
            report.distance = Some(min_distance(&candidate, Metric::Hamming, config.mode, config.budget)?);
            break;
        }
    }
    Ok(report)
}

/// One-point spec on the projective line whose code is exactly the row
/// space of `g_c` (`k_bundle = n`, `D = n·∞`, `Γ` rows `Σ_i c_{ℓ,n-1-i} t^i`).
pub fn realize_linear_code(g_c: &FqMatrix) -> Result<CodeSpec> {
    if g_c.rank() != g_c.rows() || g_c.rows() == 0 {
        return Err(Error::RankDeficient);
    }
    let f = g_c.field();
    let n = g_c.cols();
    let rows = (0..g_c.rows()).map(|l| (0..n).map(|i| g_c.get(l, n - 1 - i)).collect()).collect();
    let mut spec = CodeSpec::new(f, CurveModel::ProjectiveLine, n, Divisor::new(vec![(CurvePoint::Infinity, n)])?);
    spec.gamma = Some(FqMatrix::from_rows(f, rows, n)?);
    Ok(spec)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub t: u64,
    pub admissible: bool,
    pub witness: Option<CodeSpec>,
}

/// `max(0, ⌈(n-q-1)/(2√q)⌉)`: the least `t ≥ 0` with `4t²q ≥ (n-q-1)²`.
pub fn hasse_weil_threshold(q: u64, n: u64) -> u64 {
    if n <= q + 1 {
        return 0;
    }
    let gap = (n - q - 1) as u128;
    let target = gap * gap;
    let q = q as u128;
    // t = gap always satisfies 4t²q ≥ gap² since q ≥ 1
    let (mut lo, mut hi) = (0u128, gap);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if 4 * mid * mid * q >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo as u64
}

/// Classifies `(q, n, k)` against `t_q(n) ≤ k ≤ n - t_q(n)`; inadmissible
/// triples with `n ≥ q + 2 + ⌊2√q⌋` come with a one-point projective-line
/// witness of dimension `k`.
pub fn strong_obstruction(q: u64, n: usize, k: usize) -> Result<ObstructionReport> {
    if k == 0 || k >= n {
        return Err(Error::InvalidSpec(format!("need 1 <= k < n, got k = {}, n = {}", k, n)));
    }
    let field = Field::with_order(q)?;
    let t = hasse_weil_threshold(q, n as u64);
    let admissible = t <= k as u64 && k as u64 <= n as u64 - t;
    let threshold = q + 2 + (4 * q).isqrt();
    let witness = if !admissible && n as u64 >= threshold {
        Some(CodeSpec::new(&field, CurveModel::ProjectiveLine, k, Divisor::new(vec![(CurvePoint::Infinity, n)])?))
    } else {
        None
    };
    Ok(ObstructionReport { q, n, k, t, admissible, witness })
}

/// The Roth–Lempel generator: rows `α^(k-1), …, α, 1` over every field
/// element, then two unit columns with a 1 in the first and second rows.
pub fn roth_lempel(field: &Field, k: usize) -> Result<FqMatrix> {
    let q = field.order();
    if k == 0 || (k as u64) > q {
        return Err(Error::FieldTooSmall { q, k });
    }
    let cols = q as usize + 2;
    let mut g = FqMatrix::zeros(field, k, cols);
    for (c, a) in field.elements().enumerate() {
        for r in 0..k {
            g.set(r, c, field.pow(a, (k - 1 - r) as u64));
        }
    }
    g.set(0, cols - 2, Fq::ONE);
    if k >= 2 {
        g.set(1, cols - 1, Fq::ONE);
    }
    Ok(g)
}

/// Divisor `Σ_α p_α + 2∞` realizing [`roth_lempel`] (rows reversed).
pub fn roth_lempel_spec(field: &Field, k: usize) -> Result<CodeSpec> {
    let mut d: Vec<(CurvePoint, usize)> = field.elements().map(|a| (CurvePoint::Affine(a), 1)).collect();
    d.push((CurvePoint::Infinity, 2));
    Ok(CodeSpec::new(field, CurveModel::ProjectiveLine, k, Divisor::new(d)?))
}

/// The extended NMDS generator `G_4`: rows `α³, α², α, 1` over every field
/// element, then the unit columns `e_1, e_2, e_3`.
pub fn nmds_g4(field: &Field) -> Result<FqMatrix> {
    let q = field.order();
    if q < 4 {
        return Err(Error::FieldTooSmall { q, k: 4 });
    }
    let cols = q as usize + 3;
    let mut g = FqMatrix::zeros(field, 4, cols);
    for (c, a) in field.elements().enumerate() {
        for r in 0..4 {
            g.set(r, c, field.pow(a, (3 - r) as u64));
        }
    }
    for r in 0..3 {
        g.set(r, q as usize + r, Fq::ONE);
    }
    Ok(g)
}

/// Divisor `2p_0 + Σ_{α≠0} p_α + 2∞` with `k = 4`, realizing [`nmds_g4`] up to
/// row reversal and a column permutation.
pub fn nmds_g4_spec(field: &Field) -> Result<CodeSpec> {
    let mut d = vec![(CurvePoint::Affine(Fq::ZERO), 2)];
    d.extend(field.nonzero_elements().map(|a| (CurvePoint::Affine(a), 1)));
    d.push((CurvePoint::Infinity, 2));
    Ok(CodeSpec::new(field, CurveModel::ProjectiveLine, 4, Divisor::new(d)?))
}

/// Columns of `b` matched to equal columns of `a`, if `b` is a column
/// permutation of `a`.
pub fn column_permutation(a: &FqMatrix, b: &FqMatrix) -> Option<Vec<usize>> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return None;
    }
    let mut used = vec![false; a.cols()];
    let mut perm = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        let col = b.column(j);
        let i = (0..a.cols()).find(|&i| !used[i] && a.column(i) == col)?;
        used[i] = true;
        perm.push(i);
    }
    Some(perm)
}

/// Reverses the row order.
pub fn reverse_rows(g: &FqMatrix) -> FqMatrix {
    let rows: Vec<usize> = (0..g.rows()).rev().collect();
    g.select_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::row_space_equal;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    fn v(f: &Field, c: &[i64]) -> Vec<Fq> {
        c.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn sparsify_examples() {
        let f = f5();
        assert_eq!(sparsify_local(&f, &v(&f, &[0, 1, 0])).unwrap().coeffs(), v(&f, &[1, 0, 0]).as_slice());
        assert_eq!(sparsify_local(&f, &v(&f, &[0, 2, 3])).unwrap().coeffs(), v(&f, &[3, 3, 0]).as_slice());
        assert_eq!(sparsify_local(&f, &v(&f, &[4, 0, 0])).unwrap().coeffs(), v(&f, &[4, 0, 0]).as_slice());
        assert_eq!(sparsify_local(&f, &v(&f, &[0, 0])).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn block_distance_reached_after_sparsifying() {
        let f = f5();
        let mut spec = CodeSpec::new(
            &f,
            CurveModel::ProjectiveLine,
            1,
            Divisor::new(vec![(CurvePoint::Affine(Fq::ZERO), 2), (CurvePoint::Affine(Fq::ONE), 2)]).unwrap(),
        );
        for ld in &mut spec.local {
            ld.unit = TruncatedSeries::from_ints(&f, &[1, 1]).unwrap();
        }
        let (new_spec, cert) = achieve_block_distance(&spec, 1 << 20).unwrap();
        assert_eq!((cert.hamming_before, cert.block_distance, cert.hamming_after), (4, 2, 2));
        assert!(cert.holds());
        assert_eq!(build_code(&new_spec).unwrap().generator.row(0), v(&f, &[1, 0, 1, 0]).as_slice());
    }

    #[test]
    fn sparsifying_with_a_reparametrization() {
        let f = Field::prime(7).unwrap();
        let mut spec = CodeSpec::new(
            &f,
            CurveModel::ProjectiveLine,
            2,
            Divisor::new(vec![(CurvePoint::Affine(f.from_int(2)), 3), (CurvePoint::Infinity, 3)]).unwrap(),
        );
        spec.local[0].reparam = TruncatedSeries::from_ints(&f, &[0, 3, 5]).unwrap();
        spec.local[0].unit = TruncatedSeries::from_ints(&f, &[2, 6, 1]).unwrap();
        let (_, cert) = achieve_block_distance(&spec, 1 << 20).unwrap();
        assert!(cert.holds(), "{:?}", cert);
    }

    #[test]
    fn search_examples() {
        let f = f5();
        let d = Divisor::new(vec![(CurvePoint::Affine(Fq::ZERO), 2), (CurvePoint::Affine(Fq::ONE), 2), (CurvePoint::Infinity, 2)]).unwrap();
        let spec = CodeSpec::new(&f, CurveModel::ProjectiveLine, 2, d);
        let r = search_parameters(&spec, &SearchConfig::new(1)).unwrap();
        assert!(r.success);
        assert_eq!(r.winning_trial, Some(0));
        assert_eq!(r.delta_bound, 2);
        assert!(matches!(search_parameters(&spec, &SearchConfig::new(6)), Err(Error::InvalidTarget(_))));
        let a = search_parameters(&spec, &SearchConfig { trials: 50, ..SearchConfig::new(4) }).unwrap();
        let b = search_parameters(&spec, &SearchConfig { trials: 50, ..SearchConfig::new(4) }).unwrap();
        assert_eq!(a, b);
        if let Some(units) = &a.units {
            let mut s = spec.clone();
            for (ld, u) in s.local.iter_mut().zip(units) {
                ld.unit = u.clone();
            }
            assert!(min_distance(&build_code(&s).unwrap(), Metric::Hamming, DistanceMethod::Exhaustive, 1 << 20).unwrap().value >= 4);
        }
    }

    #[test]
    fn realization_examples() {
        let f = f5();
        let rep = FqMatrix::from_int_rows(&f, &[vec![1, 1, 1]]).unwrap();
        let spec = realize_linear_code(&rep).unwrap();
        assert_eq!(spec.gamma.as_ref().unwrap(), &rep);
        assert_eq!(build_code(&spec).unwrap().generator, rep);
        let id = FqMatrix::identity(&f, 4);
        let spec = realize_linear_code(&id).unwrap();
        assert_eq!(spec.gamma.as_ref().unwrap(), &reverse_rows(&id));
        assert!(row_space_equal(&build_code(&spec).unwrap().generator, &id).unwrap());
        let bad = FqMatrix::from_int_rows(&f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(realize_linear_code(&bad).unwrap_err(), Error::RankDeficient);
    }

    #[test]
    fn obstruction_examples() {
        let r = strong_obstruction(4, 11, 1).unwrap();
        assert_eq!((r.t, r.admissible), (2, false));
        let w = r.witness.unwrap();
        assert_eq!(build_code(&w).unwrap().dimension(), 1);
        for n in 2..=6 {
            for k in 1..n {
                let r = strong_obstruction(5, n, k).unwrap();
                assert!(r.t == 0 && r.admissible);
            }
        }
        let r = strong_obstruction(2, 7, 3).unwrap();
        assert_eq!((r.t, r.admissible), (2, true));
        assert_eq!(hasse_weil_threshold(5, 12), 2);
        assert!(matches!(strong_obstruction(6, 11, 1), Err(Error::NotAPrimePower(6))));
    }

    #[test]
    fn threshold_matches_float_ceiling_away_from_ties() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25] {
            for n in 1..200u64 {
                let x = (n as f64 - q as f64 - 1.0) / (2.0 * (q as f64).sqrt());
                let t = hasse_weil_threshold(q, n);
                if (x - x.round()).abs() > 1e-9 {
                    assert_eq!(t, x.ceil().max(0.0) as u64, "q = {}, n = {}", q, n);
                }
            }
        }
    }

    #[test]
    fn named_matrices_match_builds() {
        for q in [4u64, 5, 7, 8, 9] {
            let f = Field::with_order(q).unwrap();
            for k in 1..=q.min(6) as usize {
                let rk = roth_lempel(&f, k).unwrap();
                assert_eq!(rk.cols(), q as usize + 2);
                assert_eq!(reverse_rows(&build_code(&roth_lempel_spec(&f, k).unwrap()).unwrap().generator), rk);
            }
            let g4 = nmds_g4(&f).unwrap();
            assert_eq!((g4.rows(), g4.cols()), (4, q as usize + 3));
            let built = reverse_rows(&build_code(&nmds_g4_spec(&f).unwrap()).unwrap().generator);
            assert!(column_permutation(&built, &g4).is_some());
        }
        assert_eq!(roth_lempel(&Field::prime(3).unwrap(), 4).unwrap_err(), Error::FieldTooSmall { q: 3, k: 4 });
        assert!(nmds_g4(&Field::prime(3).unwrap()).is_err());
    }
}
