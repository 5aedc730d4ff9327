//! The Taylor group `G_n`: pairs `(a, σ)` of a truncated unit and a truncated
//! reparametrization, acting on jets by `r ↦ a·(r∘σ)`.

use num_bigint::BigUint;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::code::{CodeKind, GoppaCode};
use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::matrix::FqMatrix;
use crate::series::{check_reparam, matrix_rho, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorElement {
    a: TruncatedSeries,
    sigma: TruncatedSeries,
}

impl TaylorElement {
    pub fn new(a: TruncatedSeries, sigma: TruncatedSeries) -> Result<TaylorElement> {
        a.field().ensure_same(sigma.field())?;
        if a.precision() != sigma.precision() {
            return Err(Error::OrderMismatch(format!("unit of precision {} with reparametrization of precision {}", a.precision(), sigma.precision())));
        }
        if !a.is_unit() {
            return Err(Error::NotAUnit);
        }
        check_reparam(&sigma)?;
        Ok(TaylorElement { a, sigma })
    }

    pub fn identity(field: &Field, n: usize) -> TaylorElement {
        TaylorElement { a: TruncatedSeries::one(field, n), sigma: TruncatedSeries::variable(field, n) }
    }

    /// A pure unit `(a, t)`.
    pub fn unit(a: TruncatedSeries) -> Result<TaylorElement> {
        let sigma = TruncatedSeries::variable(a.field(), a.precision());
        TaylorElement::new(a, sigma)
    }

    pub fn a(&self) -> &TruncatedSeries {
        &self.a
    }

    pub fn sigma(&self) -> &TruncatedSeries {
        &self.sigma
    }

    pub fn order(&self) -> usize {
        self.a.precision()
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    pub fn is_identity(&self) -> bool {
        *self == TaylorElement::identity(self.field(), self.order())
    }

    /// `g1·g2 = (a1·(a2∘σ1), σ2∘σ1)`.
    pub fn compose(&self, other: &TaylorElement) -> Result<TaylorElement> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(format!("orders {} and {}", self.order(), other.order())));
        }
        self.field().ensure_same(other.field())?;
        let a = self.a.mul(&other.a.compose(&self.sigma)?)?;
        let sigma = other.sigma.compose(&self.sigma)?;
        Ok(TaylorElement { a, sigma })
    }

    /// `((a∘σ^{-1})^{-1}, σ^{-1})`.
    pub fn inverse(&self) -> Result<TaylorElement> {
        let sigma = self.sigma.reversion()?;
        let a = self.a.compose(&sigma)?.inv()?;
        Ok(TaylorElement { a, sigma })
    }

    /// Matrix of `r ↦ a·(r∘σ)` on coefficient columns.
    pub fn rho(&self) -> Result<FqMatrix> {
        matrix_rho(&self.a, &self.sigma, self.order())
    }

    /// `ρ(g)` applied to a block of coefficients.
    pub fn apply(&self, block: &[Fq]) -> Result<Vec<Fq>> {
        let r = TruncatedSeries::new(self.field(), block.to_vec())?;
        if r.precision() != self.order() {
            return Err(Error::OrderMismatch(format!("block of length {} for an element of order {}", r.precision(), self.order())));
        }
        Ok(self.a.mul(&r.compose(&self.sigma)?)?.coeffs().to_vec())
    }
}

/// Applies one element per block to every codeword: the generator becomes
/// `G · diag(ρ_i)^T`.
pub fn act_on_code(code: &GoppaCode, elements: &[TaylorElement]) -> Result<GoppaCode> {
    if elements.len() != code.blocks.len() {
        return Err(Error::OrderMismatch(format!("{} elements for {} blocks", elements.len(), code.blocks.len())));
    }
    let mut rhos = Vec::with_capacity(elements.len());
    for (g, &n) in elements.iter().zip(&code.blocks) {
        if g.order() != n {
            return Err(Error::OrderMismatch(format!("element of order {} on a block of size {}", g.order(), n)));
        }
        code.field().ensure_same(g.field())?;
        rhos.push(g.rho()?.transpose());
    }
    let generator = code.generator.mul(&FqMatrix::block_diag(code.field(), &rhos)?)?;
    Ok(GoppaCode { generator, blocks: code.blocks.clone(), spec: code.spec.clone(), kind: CodeKind::TaylorImage })
}

/// Uniformly random element: `a_0 ∈ F_q^×`, `σ_1 ∈ F_q^×`, other coefficients in `F_q`.
pub fn random_element<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> TaylorElement {
    let a = TruncatedSeries::new(field, random_unit_coeffs(field, n, rng)).expect("n >= 1");
    let mut s = vec![Fq::ZERO; n];
    if n >= 2 {
        s[1..].copy_from_slice(&random_unit_coeffs(field, n - 1, rng));
    }
    TaylorElement { a, sigma: TruncatedSeries::new(field, s).expect("n >= 1") }
}

/// One random element per block from a ChaCha8 stream seeded with `seed`.
pub fn seeded_elements(field: &Field, blocks: &[usize], seed: u64) -> Vec<TaylorElement> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    blocks.iter().map(|&n| random_element(field, n, &mut rng)).collect()
}

/// `n` coefficients with a nonzero first entry.
pub fn random_unit_coeffs<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> Vec<Fq> {
    let q = field.order();
    (0..n)
        .map(|i| {
            let lo = u64::from(i == 0);
            field.from_index(rng.gen_range(lo..q)).expect("index in range")
        })
        .collect()
}

/// All elements of `G_n` in lexicographic coefficient-index order.
pub fn enumerate_group(field: &Field, n: usize, budget: u128) -> Result<Vec<TaylorElement>> {
    let needed = exact_group_order(field.order(), n);
    let needed_u = u128::try_from(&needed).unwrap_or(u128::MAX);
    if needed_u > budget {
        return Err(Error::BudgetExceeded { needed: needed_u, budget, bounds: None });
    }
    let units = tuples(field, n, 1);
    let reparams: Vec<Vec<Fq>> = if n == 1 {
        vec![vec![Fq::ZERO]]
    } else {
        tuples(field, n - 1, 1).into_iter().map(|t| std::iter::once(Fq::ZERO).chain(t).collect()).collect()
    };
    let mut out = Vec::with_capacity(needed_u as usize);
    for a in &units {
        for s in &reparams {
            out.push(TaylorElement {
                a: TruncatedSeries::new(field, a.clone())?,
                sigma: TruncatedSeries::new(field, s.clone())?,
            });
        }
    }
    Ok(out)
}

/// Tuples of length `n` whose first `nonzero_prefix` entries are nonzero.
fn tuples(field: &Field, n: usize, nonzero_prefix: usize) -> Vec<Vec<Fq>> {
    let mut out = vec![Vec::new()];
    for i in 0..n {
        let choices: Vec<Fq> = if i < nonzero_prefix { field.nonzero_elements().collect() } else { field.elements().collect() };
        out = out.iter().flat_map(|t| choices.iter().map(move |&c| [t.as_slice(), &[c]].concat())).collect();
    }
    out
}

/// `|G_n| = (q-1)q^(n-1) · (q-1)q^(n-2)` for `n ≥ 2`, and `q - 1` for `n = 1`.
pub fn exact_group_order(q: u64, n: usize) -> BigUint {
    let q = BigUint::from(q);
    let unit = (&q - 1u32) * q.pow(n.saturating_sub(1) as u32);
    if n <= 1 {
        return unit;
    }
    unit * (&q - 1u32) * q.pow((n - 2) as u32)
}

/// `(q-1)^2 q^(2n-2)`, the closed form quoted for the group order (it
/// overcounts by a factor of `q` for `n ≥ 2`); `q - 1` when `n = 1`.
pub fn quoted_group_order(q: u64, n: usize) -> BigUint {
    let q = BigUint::from(q);
    if n <= 1 {
        return &q - 1u32;
    }
    (&q - 1u32).pow(2) * q.pow((2 * n - 2) as u32)
}

/// `|GL_n(F_q)| = Π_{i<n} (q^n - q^i)`.
pub fn gl_order(q: u64, n: usize) -> BigUint {
    let q = BigUint::from(q);
    let qn = q.pow(n as u32);
    (0..n).map(|i| &qn - q.pow(i as u32)).product()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSizes {
    pub q: u64,
    pub n: usize,
    /// Order of `G_n`, also the size of each Taylor orbit of trivializations.
    #[serde(serialize_with = "as_decimal")]
    pub group_order: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub quoted_group_order: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub gl_order: BigUint,
    /// `|G_n| / |GL_n|` in lowest terms.
    #[serde(serialize_with = "as_decimal")]
    pub ratio_numerator: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub ratio_denominator: BigUint,
}

fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

pub fn orbit_sizes(q: u64, n: usize) -> OrbitSizes {
    let group_order = exact_group_order(q, n);
    let gl = gl_order(q, n);
    let g = group_order.gcd(&gl);
    OrbitSizes {
        q,
        n,
        ratio_numerator: &group_order / &g,
        ratio_denominator: &gl / &g,
        quoted_group_order: quoted_group_order(q, n),
        group_order,
        gl_order: gl,
    }
}
