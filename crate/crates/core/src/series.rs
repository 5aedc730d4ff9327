//! Truncated power series and Laurent series over a finite field.
//!
//! The `j`-th coefficient of a [`TruncatedSeries`] is the order-`j` Hasse
//! derivative of the germ it represents. Binary operations truncate to the
//! smaller precision.
//!
//! A [`LaurentSeries`] carries an explicit certified window: it is known
//! modulo `t^top`, and after normalization its first stored coefficient is
//! nonzero.
//!
//! Matrices of series operations act on coefficient columns on the left:
//! `out_m = sum_j M[m][j] * in_j`.

use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::matrix::FqMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: Field,
    coeffs: Vec<Fq>,
}

fn cauchy(f: &Field, a: &[Fq], b: &[Fq], n: usize) -> Vec<Fq> {
    let mut out = vec![Fq::ZERO; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

impl TruncatedSeries {
    pub fn new(field: &Field, coeffs: Vec<Fq>) -> Result<TruncatedSeries> {
        if coeffs.is_empty() {
            return Err(Error::PrecisionUnderflow("a truncated series needs precision at least 1".into()));
        }
        Ok(TruncatedSeries { field: field.clone(), coeffs })
    }

    /// Coefficients given as integers mapped into the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Result<TruncatedSeries> {
        TruncatedSeries::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field, n: usize) -> TruncatedSeries {
        TruncatedSeries { field: field.clone(), coeffs: vec![Fq::ZERO; n.max(1)] }
    }

    pub fn constant(field: &Field, c: Fq, n: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(field, n);
        s.coeffs[0] = c;
        s
    }

    pub fn one(field: &Field, n: usize) -> TruncatedSeries {
        TruncatedSeries::constant(field, Fq::ONE, n)
    }

    /// `t^d` at precision `n` (zero when `d >= n`).
    pub fn monomial(field: &Field, d: usize, n: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(field, n);
        if d < s.coeffs.len() {
            s.coeffs[d] = Fq::ONE;
        }
        s
    }

    /// The identity reparametrization `t`.
    pub fn variable(field: &Field, n: usize) -> TruncatedSeries {
        TruncatedSeries::monomial(field, 1, n)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Whether the series is `t` up to its precision.
    pub fn is_identity_reparam(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(i, &c)| c == if i == 1 { Fq::ONE } else { Fq::ZERO })
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, n: usize) -> Result<TruncatedSeries> {
        if n == 0 || n > self.precision() {
            return Err(Error::PrecisionUnderflow(format!(
                "cannot truncate precision {} to {}",
                self.precision(),
                n
            )));
        }
        Ok(TruncatedSeries { field: self.field.clone(), coeffs: self.coeffs[..n].to_vec() })
    }

    /// Pads with zero coefficients up to precision `n`.
    pub fn pad(&self, n: usize) -> TruncatedSeries {
        let mut c = self.coeffs.clone();
        if c.len() < n {
            c.resize(n, Fq::ZERO);
        }
        TruncatedSeries { field: self.field.clone(), coeffs: c }
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.field.ensure_same(&other.field)?;
        let n = self.precision().min(other.precision());
        let coeffs = (0..n).map(|i| self.field.add(self.coeffs[i], other.coeffs[i])).collect();
        Ok(TruncatedSeries { field: self.field.clone(), coeffs })
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncatedSeries {
        self.scale(self.field.neg(Fq::ONE))
    }

    pub fn scale(&self, c: Fq) -> TruncatedSeries {
        let coeffs = self.coeffs.iter().map(|&x| self.field.mul(c, x)).collect();
        TruncatedSeries { field: self.field.clone(), coeffs }
    }

    /// Cauchy product truncated to the smaller precision.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.field.ensure_same(&other.field)?;
        let n = self.precision().min(other.precision());
        Ok(TruncatedSeries { field: self.field.clone(), coeffs: cauchy(&self.field, &self.coeffs, &other.coeffs, n) })
    }

    pub fn pow(&self, mut e: u64) -> TruncatedSeries {
        let mut acc = TruncatedSeries::one(&self.field, self.precision());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse at the same precision.
    pub fn inv(&self) -> Result<TruncatedSeries> {
        let f = &self.field;
        let c0_inv = f.inv(self.coeffs[0]).map_err(|_| Error::NotAUnit)?;
        let n = self.precision();
        let mut out = vec![Fq::ZERO; n];
        out[0] = c0_inv;
        for k in 1..n {
            let mut s = Fq::ZERO;
            for i in 1..=k {
                s = f.add(s, f.mul(self.coeffs[i], out[k - i]));
            }
            out[k] = f.neg(f.mul(s, c0_inv));
        }
        Ok(TruncatedSeries { field: f.clone(), coeffs: out })
    }

    /// `g(sigma(t))` by Horner evaluation in the truncated ring.
    pub fn compose(&self, sigma: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.field.ensure_same(&sigma.field)?;
        if !sigma.coeffs[0].is_zero() {
            return Err(Error::NonvanishingConstantTerm);
        }
        let n = self.precision().min(sigma.precision());
        let sigma = sigma.truncate(n)?;
        let mut acc = TruncatedSeries::constant(&self.field, self.coeffs[n - 1], n);
        for i in (0..n - 1).rev() {
            acc = acc.mul(&sigma)?;
            acc.coeffs[0] = self.field.add(acc.coeffs[0], self.coeffs[i]);
        }
        Ok(acc)
    }

    /// Divides by `t^m`; the first `m` coefficients must vanish.
    pub fn shift_down(&self, m: usize) -> Result<TruncatedSeries> {
        if m >= self.precision() {
            return Err(Error::PrecisionUnderflow(format!("shift by {} exhausts precision {}", m, self.precision())));
        }
        if self.coeffs[..m].iter().any(|c| !c.is_zero()) {
            return Err(Error::Pole(m as i64));
        }
        Ok(TruncatedSeries { field: self.field.clone(), coeffs: self.coeffs[m..].to_vec() })
    }

    /// Multiplies by `t^m` keeping the precision.
    pub fn shift_up(&self, m: usize) -> TruncatedSeries {
        let n = self.precision();
        let mut c = vec![Fq::ZERO; n];
        if m < n {
            c[m..].copy_from_slice(&self.coeffs[..n - m]);
        }
        TruncatedSeries { field: self.field.clone(), coeffs: c }
    }

    /// Formal derivative; the precision drops by one (and stays at least 1).
    pub fn derivative(&self) -> TruncatedSeries {
        let f = &self.field;
        let n = self.precision();
        if n == 1 {
            return TruncatedSeries::zero(f, 1);
        }
        let coeffs = (1..n).map(|i| f.mul(f.from_int((i as u64 % f.characteristic()) as i64), self.coeffs[i])).collect();
        TruncatedSeries { field: f.clone(), coeffs }
    }

    /// Compositional inverse: `tau` with `self(tau(t)) = t` and `tau(self(t)) = t`.
    pub fn reversion(&self) -> Result<TruncatedSeries> {
        let f = &self.field;
        let n = self.precision();
        check_reparam(self)?;
        if n == 1 {
            return Ok(self.clone());
        }
        let c1_inv = f.inv(self.coeffs[1])?;
        let t = TruncatedSeries::variable(f, n);
        let mut tau = t.scale(c1_inv);
        for _ in 1..n {
            let err = self.compose(&tau)?.sub(&t)?;
            if err.is_zero() {
                break;
            }
            tau = tau.sub(&err.scale(c1_inv))?;
        }
        Ok(tau)
    }

    pub fn to_laurent(&self) -> LaurentSeries {
        LaurentSeries::new(&self.field, 0, self.coeffs.clone())
    }
}

/// Checks `c_0 = 0` and, when visible, `c_1 != 0`.
pub fn check_reparam(sigma: &TruncatedSeries) -> Result<()> {
    if !sigma.coeffs[0].is_zero() || (sigma.precision() >= 2 && sigma.coeffs[1].is_zero()) {
        return Err(Error::NotAReparametrization);
    }
    Ok(())
}

/// Matrix of `v ↦ f·v` on the first `n` coefficients: entry `(m, j)` is `f_{m-j}`.
pub fn matrix_s(f: &TruncatedSeries, n: usize) -> Result<FqMatrix> {
    if !f.is_unit() {
        return Err(Error::NotAUnit);
    }
    if f.precision() < n {
        return Err(Error::PrecisionUnderflow(format!("unit of precision {} for a {}x{} matrix", f.precision(), n, n)));
    }
    let mut m = FqMatrix::zeros(f.field(), n, n);
    for i in 0..n {
        for j in 0..=i {
            m.set(i, j, f.coeff(i - j));
        }
    }
    Ok(m)
}

/// Matrix of `g ↦ g∘σ` on the first `n` coefficients: column `j` holds `σ^j`.
pub fn matrix_t(sigma: &TruncatedSeries, n: usize) -> Result<FqMatrix> {
    check_reparam(sigma)?;
    if sigma.precision() < n {
        return Err(Error::PrecisionUnderflow(format!(
            "reparametrization of precision {} for a {}x{} matrix",
            sigma.precision(),
            n,
            n
        )));
    }
    let field = sigma.field();
    let s = sigma.truncate(n)?;
    let mut m = FqMatrix::zeros(field, n, n);
    let mut power = TruncatedSeries::one(field, n);
    for j in 0..n {
        for i in 0..n {
            m.set(i, j, power.coeff(i));
        }
        power = power.mul(&s)?;
    }
    Ok(m)
}

/// Matrix of `r ↦ a·σ(r)`, equal to `matrix_s(a) · matrix_t(σ)`.
pub fn matrix_rho(a: &TruncatedSeries, sigma: &TruncatedSeries, n: usize) -> Result<FqMatrix> {
    matrix_s(a, n)?.mul(&matrix_t(sigma, n)?)
}

/// A Laurent series known modulo `t^top`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    /// Degree of `coeffs[0]`; for the zero series this equals `top`.
    val: i64,
    coeffs: Vec<Fq>,
}

impl LaurentSeries {
    /// The series `sum_i coeffs[i] t^(val + i)`, known modulo `t^(val + len)`.
    pub fn new(field: &Field, val: i64, coeffs: Vec<Fq>) -> LaurentSeries {
        let lead = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(coeffs.len());
        LaurentSeries { field: field.clone(), val: val + lead as i64, coeffs: coeffs[lead..].to_vec() }
    }

    pub fn from_ints(field: &Field, val: i64, coeffs: &[i64]) -> LaurentSeries {
        LaurentSeries::new(field, val, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    /// Zero, known modulo `t^top`.
    pub fn zero(field: &Field, top: i64) -> LaurentSeries {
        LaurentSeries { field: field.clone(), val: top, coeffs: Vec::new() }
    }

    /// `t^e` with `rel` certified coefficients.
    pub fn monomial(field: &Field, e: i64, rel: usize) -> LaurentSeries {
        let mut c = vec![Fq::ZERO; rel.max(1)];
        c[0] = Fq::ONE;
        LaurentSeries::new(field, e, c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order of vanishing, or `None` for the zero series.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    /// Exclusive upper end of the certified window.
    pub fn top(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    /// Number of certified coefficients from the valuation on.
    pub fn relative_precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficients from the valuation upward.
    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    /// Coefficient of `t^d`.
    pub fn coeff(&self, d: i64) -> Result<Fq> {
        if d >= self.top() {
            return Err(Error::PrecisionUnderflow(format!(
                "degree {} lies outside the certified window (known below {})",
                d,
                self.top()
            )));
        }
        if d < self.val {
            return Ok(Fq::ZERO);
        }
        Ok(self.coeffs[(d - self.val) as usize])
    }

    fn effective_val(&self) -> i64 {
        self.val
    }

    pub fn mul(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.field.ensure_same(&other.field)?;
        let top = (self.top() + other.effective_val()).min(other.top() + self.effective_val());
        if self.is_zero() || other.is_zero() {
            return Ok(LaurentSeries::zero(&self.field, top));
        }
        let val = self.val + other.val;
        let n = (top - val) as usize;
        Ok(LaurentSeries::new(&self.field, val, cauchy(&self.field, &self.coeffs, &other.coeffs, n)))
    }

    pub fn inv(&self) -> Result<LaurentSeries> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let unit = TruncatedSeries { field: self.field.clone(), coeffs: self.coeffs.clone() };
        Ok(LaurentSeries::new(&self.field, -self.val, unit.inv()?.coeffs))
    }

    pub fn div(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.mul(&other.inv()?)
    }

    pub fn add(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.field.ensure_same(&other.field)?;
        let top = self.top().min(other.top());
        let val = self.val.min(other.val).min(top);
        let n = (top - val) as usize;
        let f = &self.field;
        let coeffs = (0..n)
            .map(|i| {
                let d = val + i as i64;
                f.add(self.coeff(d).expect("inside window"), other.coeff(d).expect("inside window"))
            })
            .collect();
        Ok(LaurentSeries::new(f, val, coeffs))
    }

    pub fn neg(&self) -> LaurentSeries {
        self.scale(self.field.neg(Fq::ONE))
    }

    pub fn sub(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fq) -> LaurentSeries {
        let coeffs = self.coeffs.iter().map(|&x| self.field.mul(c, x)).collect();
        if c.is_zero() {
            return LaurentSeries::zero(&self.field, self.top());
        }
        LaurentSeries { field: self.field.clone(), val: self.val, coeffs }
    }

    /// Multiplies by `t^e`.
    pub fn shift(&self, e: i64) -> LaurentSeries {
        LaurentSeries { field: self.field.clone(), val: self.val + e, coeffs: self.coeffs.clone() }
    }

    pub fn pow(&self, e: i64) -> Result<LaurentSeries> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = LaurentSeries::monomial(&self.field, 0, base.relative_precision().max(1));
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Formal derivative `d/dt`.
    pub fn derivative(&self) -> LaurentSeries {
        let f = &self.field;
        let p = f.characteristic() as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| f.mul(f.from_int((self.val + i as i64).rem_euclid(p)), c))
            .collect();
        let top = self.top() - 1;
        let s = LaurentSeries::new(f, self.val - 1, coeffs);
        if s.is_zero() {
            LaurentSeries::zero(f, top)
        } else {
            s
        }
    }

    /// Coefficient of `t^{-1}`.
    pub fn residue(&self) -> Result<Fq> {
        self.coeff(-1)
    }

    /// Restricts the certified window to degrees below `top`.
    pub fn truncate_top(&self, top: i64) -> Result<LaurentSeries> {
        if top > self.top() {
            return Err(Error::PrecisionUnderflow(format!("requested window up to {} but known below {}", top, self.top())));
        }
        if top <= self.val {
            return Ok(LaurentSeries::zero(&self.field, top));
        }
        Ok(LaurentSeries::new(&self.field, self.val, self.coeffs[..(top - self.val) as usize].to_vec()))
    }

    /// Coefficients of degrees `0..n`; fails on a pole or a short window.
    pub fn to_truncated(&self, n: usize) -> Result<TruncatedSeries> {
        if let Some(v) = self.valuation() {
            if v < 0 {
                return Err(Error::Pole(-v));
            }
        }
        let coeffs = (0..n as i64).map(|d| self.coeff(d)).collect::<Result<Vec<_>>>()?;
        TruncatedSeries::new(&self.field, coeffs)
    }
}
