//! Finite fields `F_p` and `F_{p^m}` in a polynomial basis.
//!
//! A [`Field`] is a cheap, clonable handle. Elements are plain [`Fq`] values
//! holding the index `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` of their canonical
//! representative `c_0 + c_1 x + ... + c_{m-1} x^{m-1}`; all arithmetic goes
//! through the field handle. Enumeration follows the index order, so `0`
//! comes first and `1` second.
//!
//! [`FieldElement`] pairs a value with its field and is used where operands
//! from different fields must be rejected.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order for which a modulus is chosen automatically.
pub const BUILTIN_MODULUS_LIMIT: u64 = 1 << 20;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 31;

/// Default cap on the number of field elements materialized at once.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 20;

/// An element of some [`Field`], identified by its representative index.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fq(u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    /// Index of the canonical representative.
    pub fn index(self) -> u64 {
        self.0 as u64
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u64,
    m: usize,
    q: u64,
    /// Monic modulus, lowest coefficient first, length `m + 1`.
    modulus: Vec<u64>,
}

/// Handle to a finite field. Clones share the same description.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.m == 1 {
            write!(f, "F_{}", self.inner.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.inner.p, self.inner.m, self.inner.modulus)
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.m == other.inner.m
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^m`, or returns `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut r, mut m) = (q, 0usize);
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p, m))
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// The field of order `q`, using the built-in modulus for extensions.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, m) = prime_power(q).ok_or(Error::NotAPrimePower(q))?;
        Field::new(p, m, None)
    }

    /// `F_{p^m}` with the given monic modulus (lowest coefficient first), or
    /// the built-in one when `modulus` is `None`.
    pub fn new(p: u64, m: usize, modulus: Option<&[u64]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidModulus("extension degree must be positive".into()));
        }
        let q = checked_pow(p, m).filter(|&q| q <= MAX_FIELD_ORDER);
        let q = q.ok_or(Error::FieldTooLarge { p, m })?;
        let modulus = match modulus {
            Some(c) => {
                if c.len() != m + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected {} coefficients, got {}",
                        m + 1,
                        c.len()
                    )));
                }
                if c.iter().any(|&x| x >= p) {
                    return Err(Error::InvalidModulus("coefficient out of range".into()));
                }
                if c[m] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if m > 1 && !is_irreducible(c, p) {
                    return Err(Error::ReducibleModulus { p });
                }
                c.to_vec()
            }
            None if m == 1 => vec![0, 1],
            None => {
                if q > BUILTIN_MODULUS_LIMIT {
                    return Err(Error::NoBuiltinModulus { p, m });
                }
                builtin_modulus(p, m)
            }
        };
        Ok(Field { inner: Arc::new(Inner { p, m, q, modulus }) })
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.p
    }

    pub fn degree(&self) -> usize {
        self.inner.m
    }

    /// Number of elements `q = p^m`.
    pub fn order(&self) -> u64 {
        self.inner.q
    }

    /// The modulus, lowest coefficient first.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    pub fn one(&self) -> Fq {
        Fq::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.inner.p as i64) as u32)
    }

    /// The element with the given representative index.
    pub fn from_index(&self, i: u64) -> Result<Fq> {
        if i >= self.inner.q {
            return Err(Error::InvalidElement(format!("index {} out of range for order {}", i, self.inner.q)));
        }
        Ok(Fq(i as u32))
    }

    /// The element `c_0 + c_1 x + ...`; missing trailing coordinates are zero.
    pub fn from_coords(&self, c: &[u64]) -> Result<Fq> {
        let (p, m) = (self.inner.p, self.inner.m);
        if c.len() > m {
            return Err(Error::InvalidElement(format!("{} coordinates for degree {}", c.len(), m)));
        }
        let mut idx = 0u64;
        for &d in c.iter().rev() {
            if d >= p {
                return Err(Error::InvalidElement(format!("coordinate {} not reduced mod {}", d, p)));
            }
            idx = idx * p + d;
        }
        Ok(Fq(idx as u32))
    }

    /// Coordinates `c_0..c_{m-1}` of the representative.
    pub fn coords(&self, a: Fq) -> Vec<u64> {
        let p = self.inner.p;
        let mut x = a.index();
        (0..self.inner.m)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    fn digits(&self, a: Fq, out: &mut [u64]) {
        let p = self.inner.p;
        let mut x = a.index();
        for d in out.iter_mut().take(self.inner.m) {
            *d = x % p;
            x /= p;
        }
    }

    fn from_digits(&self, d: &[u64]) -> Fq {
        let p = self.inner.p;
        let mut idx = 0u64;
        for &c in d[..self.inner.m].iter().rev() {
            idx = idx * p + c;
        }
        Fq(idx as u32)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let p = self.inner.p;
        if self.inner.m == 1 {
            let s = a.index() + b.index();
            return Fq(if s >= p { s - p } else { s } as u32);
        }
        if p == 2 {
            return Fq(a.0 ^ b.0);
        }
        let (mut x, mut y, mut r, mut pw) = (a.index(), b.index(), 0u64, 1u64);
        for _ in 0..self.inner.m {
            r += ((x % p + y % p) % p) * pw;
            x /= p;
            y /= p;
            pw *= p;
        }
        Fq(r as u32)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        let p = self.inner.p;
        if self.inner.m == 1 {
            return Fq(if a.0 == 0 { 0 } else { (p - a.index()) as u32 });
        }
        if p == 2 {
            return a;
        }
        let (mut x, mut r, mut pw) = (a.index(), 0u64, 1u64);
        for _ in 0..self.inner.m {
            r += ((p - x % p) % p) * pw;
            x /= p;
            pw *= p;
        }
        Fq(r as u32)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        let p = self.inner.p;
        let m = self.inner.m;
        if m == 1 {
            return Fq((a.index() * b.index() % p) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let mut da = [0u64; 32];
        let mut db = [0u64; 32];
        self.digits(a, &mut da);
        self.digits(b, &mut db);
        let mut prod = [0u64; 64];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let md = &self.inner.modulus;
        for top in (m..2 * m - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..m {
                let off = top - m + i;
                prod[off] = (prod[off] + (p - c) * md[i]) % p;
            }
        }
        self.from_digits(&prod)
    }

    pub fn square(&self, a: Fq) -> Fq {
        self.mul(a, a)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.inner.p;
        if self.inner.m == 1 {
            let (mut r0, mut r1) = (p as i64, a.index() as i64);
            let (mut s0, mut s1) = (0i64, 1i64);
            while r1 != 0 {
                let t = r0 / r1;
                (r0, r1) = (r1, r0 - t * r1);
                (s0, s1) = (s1, s0 - t * s1);
            }
            return Ok(self.from_int(s0));
        }
        let inv = poly::inv_mod(&trim(self.coords(a)), &self.inner.modulus, p);
        let mut d = inv;
        d.resize(self.inner.m, 0);
        Ok(self.from_digits(&d))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Signed power; negative exponents need a nonzero base.
    pub fn powi(&self, a: Fq, e: i64) -> Result<Fq> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.inner.q as u32).map(Fq)
    }

    /// All elements in index order, refusing fields larger than `budget`.
    pub fn enumerate(&self, budget: u64) -> Result<Vec<Fq>> {
        if self.inner.q > budget {
            return Err(Error::BudgetExceeded {
                needed: self.inner.q as u128,
                budget: budget as u128,
                bounds: None,
            });
        }
        Ok(self.elements().collect())
    }

    /// Nonzero elements in index order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fq> {
        (1..self.inner.q as u32).map(Fq)
    }

    /// `binom(m, j)` reduced into the field by Pascal's rule mod p.
    pub fn binom(&self, m: u64, j: u64) -> Fq {
        if j > m {
            return Fq::ZERO;
        }
        let j = j.min(m - j) as usize;
        let p = self.inner.p;
        let mut row = vec![0u64; j + 1];
        row[0] = 1;
        for i in 1..=m as usize {
            for r in (1..=j.min(i)).rev() {
                row[r] = (row[r] + row[r - 1]) % p;
            }
        }
        Fq(row[j] as u32)
    }

    /// Whether the two handles describe the same field.
    pub fn same(&self, other: &Field) -> bool {
        self == other
    }

    /// Checks that both handles describe the same field.
    pub fn ensure_same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Binds a value to this field.
    pub fn bind(&self, value: Fq) -> FieldElement {
        FieldElement { field: self.clone(), value }
    }

    /// Human-readable form: the integer for prime fields, coordinates otherwise.
    pub fn format(&self, a: Fq) -> String {
        if self.inner.m == 1 {
            a.index().to_string()
        } else {
            format!("{:?}", self.coords(a))
        }
    }
}

fn checked_pow(p: u64, m: usize) -> Option<u64> {
    let mut q = 1u64;
    for _ in 0..m {
        q = q.checked_mul(p)?;
    }
    Some(q)
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Whether the monic polynomial `f` (lowest coefficient first) of degree
/// `m >= 1` is irreducible over `F_p`. Degrees up to 3 use the root test;
/// higher degrees check `gcd(f, x^{p^i} - x) = 1` for `i <= m / 2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m <= 1 {
        return m == 1;
    }
    if m <= 3 {
        return !has_root(f, p);
    }
    is_irreducible_gcd(f, p)
}

fn has_root(f: &[u64], p: u64) -> bool {
    (0..p).any(|x| f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0)
}

/// The gcd-based irreducibility test for any degree.
pub fn is_irreducible_gcd(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for _ in 1..=m / 2 {
        h = poly::pow_mod(&h, p, f, p);
        let diff = poly::sub(&h, &x, p);
        let g = poly::gcd(f.to_vec(), diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn builtin_modulus(p: u64, m: usize) -> Vec<u64> {
    // First monic irreducible in index order of (c_0, ..., c_{m-1}).
    let q = p.pow(m as u32);
    for idx in 0..q {
        let mut f = Vec::with_capacity(m + 1);
        let mut x = idx;
        for _ in 0..m {
            f.push(x % p);
            x /= p;
        }
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Dense polynomials over `F_p`, lowest coefficient first, without trailing zeros.
mod poly {
    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn inv_p(a: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut r: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut r);
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % p;
            }
        }
        trim(&mut r);
        r
    }

    /// Quotient and remainder of `a` by nonzero `b`.
    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let lead_inv = inv_p(b[db], p);
        let mut quo = vec![0u64; r.len() - db];
        while r.len() > db {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            let shift = top - db;
            quo[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * bi % p) % p;
            }
            trim(&mut r);
        }
        trim(&mut quo);
        (quo, r)
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        divrem(a, b, p).1
    }

    pub fn pow_mod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), f, p);
            }
            b = rem(&mul(&b, &b, p), f, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Inverse of nonzero `a` modulo the irreducible `f`.
    pub fn inv_mod(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let (mut r0, mut r1) = (f.to_vec(), a.to_vec());
        let (mut s0, mut s1) = (Vec::<u64>::new(), vec![1u64]);
        while !r1.is_empty() {
            let (quo, r) = divrem(&r0, &r1, p);
            let s = sub(&s0, &mul(&quo, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant c; the inverse is s0 / c.
        let c = inv_p(r0[0], p);
        let mut out: Vec<u64> = s0.iter().map(|&x| x * c % p).collect();
        trim(&mut out);
        rem(&out, f, p)
    }
}

/// An element bound to its field, for operations that must reject operands
/// from different fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    pub field: Field,
    pub value: Fq,
}

/// Binary field operations accepted by [`arith`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Applies `op` to two elements of the same field.
pub fn arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    a.field.ensure_same(&b.field)?;
    let f = &a.field;
    let value = match op {
        ArithOp::Add => f.add(a.value, b.value),
        ArithOp::Sub => f.sub(a.value, b.value),
        ArithOp::Mul => f.mul(a.value, b.value),
        ArithOp::Div => f.div(a.value, b.value)?,
    };
    Ok(f.bind(value))
}

impl FieldElement {
    pub fn neg(&self) -> FieldElement {
        self.field.bind(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.field.bind(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.bind(self.field.pow(self.value, e))
    }
}
