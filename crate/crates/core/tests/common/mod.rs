//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use diffgoppa::code::{CodeSpec, Divisor, LocalData};
use diffgoppa::curve::{CurveModel, CurvePoint};
use diffgoppa::series::TruncatedSeries;
use diffgoppa::{Field, Fq, FqMatrix};
use rand::seq::SliceRandom;
use rand::Rng;

/// Prints one sub-check line.
pub fn note(criterion: u32, part: &str, ok: bool, detail: &str) {
    println!("criterion {:>2} [{}] {}: {}", criterion, part, if ok { "PASS" } else { "FAIL" }, detail);
}

/// Prints the overall line for a criterion and fails the test if it failed.
pub fn verdict(criterion: u32, ok: bool) {
    println!("criterion {:>2}: {}", criterion, if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {} failed", criterion);
}

pub fn elem<R: Rng>(f: &Field, rng: &mut R) -> Fq {
    f.from_index(rng.gen_range(0..f.order())).unwrap()
}

pub fn nonzero<R: Rng>(f: &Field, rng: &mut R) -> Fq {
    f.from_index(rng.gen_range(1..f.order())).unwrap()
}

pub fn random_unit<R: Rng>(f: &Field, n: usize, rng: &mut R) -> TruncatedSeries {
    let mut c: Vec<Fq> = (0..n).map(|_| elem(f, rng)).collect();
    c[0] = nonzero(f, rng);
    TruncatedSeries::new(f, c).unwrap()
}

pub fn random_reparam<R: Rng>(f: &Field, n: usize, rng: &mut R) -> TruncatedSeries {
    let mut c: Vec<Fq> = (0..n).map(|_| elem(f, rng)).collect();
    c[0] = Fq::ZERO;
    if n >= 2 {
        c[1] = nonzero(f, rng);
    }
    TruncatedSeries::new(f, c).unwrap()
}

/// Affine points of `y² = x³ + Ax + B` with `y ≠ 0`, by trying every pair.
pub fn elliptic_affine_points(f: &Field, a: Fq, b: Fq) -> Vec<CurvePoint> {
    let mut out = Vec::new();
    for x in f.elements() {
        let rhs = f.add(f.add(f.mul(f.square(x), x), f.mul(a, x)), b);
        for y in f.nonzero_elements() {
            if f.square(y) == rhs {
                out.push(CurvePoint::AffineE(x, y));
            }
        }
    }
    out
}

/// Nonsingular `(A, B)` pairs over a field of characteristic at least 5.
pub fn nonsingular_curves(f: &Field) -> Vec<(Fq, Fq)> {
    let mut out = Vec::new();
    for a in f.elements() {
        for b in f.elements() {
            let disc = f.add(f.mul(f.from_int(4), f.mul(f.square(a), a)), f.mul(f.from_int(27), f.square(b)));
            if !disc.is_zero() {
                out.push((a, b));
            }
        }
    }
    out
}

/// Random local data on every point of the spec.
pub fn randomize_local<R: Rng>(spec: &mut CodeSpec, units: bool, reparams: bool, rng: &mut R) {
    let f = spec.field.clone();
    for (ld, &(_, n)) in spec.local.iter_mut().zip(spec.divisor.entries()) {
        *ld = LocalData {
            unit: if units { random_unit(&f, n, rng) } else { TruncatedSeries::one(&f, n) },
            reparam: if reparams { random_reparam(&f, n, rng) } else { TruncatedSeries::variable(&f, n) },
        };
    }
}

/// A divisor on the projective line with `points` distinct points and
/// multiplicities in `1..=max_mult`.
pub fn random_p1_divisor<R: Rng>(f: &Field, points: usize, max_mult: usize, rng: &mut R) -> Divisor {
    let mut all: Vec<CurvePoint> = f.elements().map(CurvePoint::Affine).collect();
    all.push(CurvePoint::Infinity);
    all.shuffle(rng);
    let entries = all.into_iter().take(points).map(|p| (p, rng.gen_range(1..=max_mult))).collect();
    Divisor::new(entries).unwrap()
}

pub fn random_elliptic_divisor<R: Rng>(f: &Field, a: Fq, b: Fq, points: usize, max_mult: usize, rng: &mut R) -> Divisor {
    let mut all = elliptic_affine_points(f, a, b);
    all.push(CurvePoint::Infinity);
    all.shuffle(rng);
    let entries = all.into_iter().take(points).map(|p| (p, rng.gen_range(1..=max_mult))).collect();
    Divisor::new(entries).unwrap()
}

pub fn p1_spec(f: &Field, k: usize, d: Divisor) -> CodeSpec {
    CodeSpec::new(f, CurveModel::ProjectiveLine, k, d)
}

/// Every codeword of the row space of `g` (including zero), by running
/// through all coefficient vectors and multiplying out.
pub fn all_codewords(g: &FqMatrix) -> Vec<Vec<Fq>> {
    let f = g.field();
    let basis = g.row_basis();
    let k = basis.rows();
    let q = f.order();
    let total = q.pow(k as u32);
    let mut out = Vec::with_capacity(total as usize);
    for mut idx in 0..total {
        let mut coeffs = Vec::with_capacity(k);
        for _ in 0..k {
            coeffs.push(f.from_index(idx % q).unwrap());
            idx /= q;
        }
        let mut word = vec![Fq::ZERO; basis.cols()];
        for (i, &c) in coeffs.iter().enumerate() {
            for (j, w) in word.iter_mut().enumerate() {
                *w = f.add(*w, f.mul(c, basis.get(i, j)));
            }
        }
        out.push(word);
    }
    out
}

pub fn split<'a>(word: &'a [Fq], blocks: &[usize]) -> Vec<&'a [Fq]> {
    let mut off = 0;
    blocks
        .iter()
        .map(|&n| {
            let b = &word[off..off + n];
            off += n;
            b
        })
        .collect()
}

pub fn hamming(word: &[Fq], _: &[usize]) -> usize {
    word.iter().filter(|c| !c.is_zero()).count()
}

pub fn block(word: &[Fq], blocks: &[usize]) -> usize {
    split(word, blocks).iter().filter(|b| b.iter().any(|c| !c.is_zero())).count()
}

/// Per block, the count of positions from the first nonzero one to the end.
pub fn rt(word: &[Fq], blocks: &[usize]) -> usize {
    split(word, blocks)
        .iter()
        .map(|b| match b.iter().position(|c| !c.is_zero()) {
            Some(m) => b.len() - m,
            None => 0,
        })
        .sum()
}

/// Per block, one plus the index of the last nonzero position.
pub fn rt_last(word: &[Fq], blocks: &[usize]) -> usize {
    split(word, blocks).iter().map(|b| b.iter().rposition(|c| !c.is_zero()).map_or(0, |m| m + 1)).sum()
}

pub fn rank_weight(f: &Field, word: &[Fq], blocks: &[usize]) -> usize {
    let rows = split(word, blocks).iter().map(|b| b.to_vec()).collect();
    FqMatrix::from_rows(f, rows, blocks[0]).unwrap().rank()
}

/// Minimum of `w` over nonzero codewords, with a minimizing codeword.
pub fn naive_min<W: Fn(&[Fq]) -> usize>(g: &FqMatrix, w: W) -> Option<(usize, Vec<Fq>)> {
    all_codewords(g).into_iter().filter(|c| c.iter().any(|x| !x.is_zero())).map(|c| (w(&c), c)).min_by_key(|(v, _)| *v)
}

/// `C(n, k) mod p` from exact integer arithmetic.
pub fn binom_mod(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    (acc % p as u128) as u64
}
