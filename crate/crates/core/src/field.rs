//! Finite-field towers `F_p ⊆ F_q ⊆ F_{q^k} ⊆ F_{q^n}` in discrete-log form.
//!
//! The top field `F_{p^{en}}` is stored as `F_p[x]/(f)` for a primitive
//! polynomial `f`, so the class of `x` is a primitive element `ω`. Every
//! nonzero element is kept as its power index; addition goes through a Zech
//! table. Subfields need no tables of their own: `F_{p^d}` is exactly the set
//! of elements whose index is a multiple of `(p^{en}-1)/(p^d-1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper limit on the number of elements of the top field.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 22;

/// Largest scalar field supported by the packed linear algebra.
pub const MAX_SCALAR_ORDER: u64 = 256;

const NO_LOG: u32 = u32::MAX;

/// An element of the top field in log representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    Zero,
    /// `ω^i` with `0 <= i < p^{en} - 1`.
    Pow(u32),
}

impl FieldElement {
    pub fn is_zero(self) -> bool {
        matches!(self, FieldElement::Zero)
    }

    pub fn log(self) -> Option<u32> {
        match self {
            FieldElement::Zero => None,
            FieldElement::Pow(i) => Some(i),
        }
    }
}

/// Self-describing identification of a tower; embedded in output files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerDescriptor {
    pub p: u64,
    pub e: usize,
    pub k: usize,
    pub n: usize,
    /// Coefficients of the defining polynomial over `F_p`, low to high.
    pub modulus: Vec<u64>,
}

/// Arithmetic in `F_q` on canonical indices.
///
/// For prime `q` the index of a scalar is its residue. For `q = p^e` with
/// `e > 1`, index 0 is zero and index `j >= 1` is `γ^{j-1}`, where
/// `γ = ω^{(q^n-1)/(q-1)}` is the generator of `F_q^*` inherited from the
/// tower. In both cases index 1 is the multiplicative identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarField {
    p: u64,
    e: usize,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl ScalarField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_SCALAR_ORDER {
            return Err(Error::ScalarFieldTooLarge(p));
        }
        Ok(Self::from_fns(p, 1, |a, b| (a + b) % p as usize, |a, b| (a * b) % p as usize))
    }

    fn from_fns(
        p: u64,
        e: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let q = p.pow(e as u32) as usize;
        let mut add_t = vec![0u8; q * q];
        let mut mul_t = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                add_t[a * q + b] = add(a, b) as u8;
                mul_t[a * q + b] = mul(a, b) as u8;
            }
        }
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            for b in 0..q {
                if add_t[a * q + b] == 0 {
                    neg[a] = b as u8;
                }
                if mul_t[a * q + b] == 1 {
                    inv[a] = b as u8;
                }
            }
        }
        ScalarField { p, e, q, add: add_t, mul: mul_t, neg, inv }
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u8) -> Result<u8> {
        if a == 0 {
            Err(Error::ZeroInverse)
        } else {
            Ok(self.inv[a as usize])
        }
    }

    /// Inverse without the zero check; returns 0 for 0.
    #[inline]
    pub(crate) fn inv_unchecked(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    /// Row of the multiplication table for `c`: `mul_row(c)[x] = c * x`.
    #[inline]
    pub(crate) fn mul_row(&self, c: u8) -> &[u8] {
        let s = c as usize * self.q;
        &self.mul[s..s + self.q]
    }
}

/// The field tower for one choice of `(p, e, k, n)`.
#[derive(Clone, Debug)]
pub struct FieldTower {
    p: u64,
    e: usize,
    k: usize,
    n: usize,
    degree: usize,
    order: u64,
    q: u64,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    spread_size: u64,
    scalars: ScalarField,
    coords: CoordinateMap,
}

#[derive(Clone, Debug)]
enum CoordinateMap {
    /// `e = 1`: the coefficient code already holds the coordinates.
    Prime,
    /// `e > 1`: change of basis from `{ω^j}` over `F_p` to `{γ^a ω^i}`.
    Extension {
        basis_inv: Vec<u64>,
        scalar_from_digits: Vec<u8>,
        scalar_elements: Vec<FieldElement>,
    },
}

impl FieldTower {
    /// Builds the tower with the smallest primitive modulus and the default cap.
    pub fn build(p: u64, e: usize, k: usize, n: usize) -> Result<Self> {
        Self::build_with_cap(p, e, k, n, DEFAULT_TABLE_CAP)
    }

    pub fn build_with_cap(p: u64, e: usize, k: usize, n: usize, cap: u64) -> Result<Self> {
        let (degree, order) = validate(p, e, k, n, cap)?;
        let modulus = smallest_primitive(p, degree);
        Self::assemble(p, e, k, n, degree, order, modulus)
    }

    /// Rebuilds a tower from a descriptor, accepting any primitive modulus.
    pub fn from_descriptor(d: &TowerDescriptor, cap: u64) -> Result<Self> {
        let (degree, order) = validate(d.p, d.e, d.k, d.n, cap)?;
        let m = &d.modulus;
        if m.len() != degree + 1 || m[degree] != 1 || m.iter().any(|&c| c >= d.p) {
            return Err(Error::InvalidModulus(degree));
        }
        if !poly::is_primitive(m, d.p) {
            return Err(Error::InvalidModulus(degree));
        }
        Self::assemble(d.p, d.e, d.k, d.n, degree, order, m.clone())
    }

    fn assemble(
        p: u64,
        e: usize,
        k: usize,
        n: usize,
        degree: usize,
        order: u64,
        modulus: Vec<u64>,
    ) -> Result<Self> {
        let group = order - 1;
        let mut exp = Vec::with_capacity(group as usize);
        let mut log = vec![NO_LOG; order as usize];
        let mut coeffs = vec![0u64; degree];
        coeffs[0] = 1;
        for i in 0..group {
            let code = encode(&coeffs, p);
            if log[code as usize] != NO_LOG {
                return Err(Error::InvalidModulus(degree));
            }
            log[code as usize] = i as u32;
            exp.push(code);
            times_x(&mut coeffs, &modulus, p);
        }
        if encode(&coeffs, p) != 1 {
            return Err(Error::InvalidModulus(degree));
        }

        let zech = exp
            .iter()
            .map(|&code| {
                let c0 = code as u64 % p;
                let shifted = code as u64 - c0 + (c0 + 1) % p;
                log[shifted as usize]
            })
            .collect();

        let q = p.pow(e as u32);
        let spread_size = (order - 1) / (q.pow(k as u32) - 1);
        let mut tower = FieldTower {
            p,
            e,
            k,
            n,
            degree,
            order,
            q,
            modulus,
            exp,
            log,
            zech,
            spread_size,
            scalars: ScalarField::prime(p)?,
            coords: CoordinateMap::Prime,
        };
        if e > 1 {
            tower.install_extension_scalars()?;
        }
        Ok(tower)
    }

    fn install_extension_scalars(&mut self) -> Result<()> {
        let (p, e, n, q) = (self.p, self.e, self.n, self.q as usize);
        let gamma = self.pow(self.omega(), (self.order - 1) / (q as u64 - 1));
        let step = (self.order - 1) / (q as u64 - 1);
        let scalar_elements: Vec<FieldElement> = std::iter::once(FieldElement::Zero)
            .chain((0..q - 1).map(|j| self.pow(gamma, j as u64)))
            .collect();
        let index_of = |x: FieldElement| -> u8 {
            match x {
                FieldElement::Zero => 0,
                FieldElement::Pow(i) => {
                    debug_assert_eq!(i as u64 % step, 0);
                    (i as u64 / step + 1) as u8
                }
            }
        };
        // digits d_0..d_{e-1} over F_p, code = Σ d_a p^a  ↦  Σ d_a γ^a
        let mut scalar_from_digits = vec![0u8; q];
        for (code, slot) in scalar_from_digits.iter_mut().enumerate() {
            let mut acc = FieldElement::Zero;
            let mut c = code as u64;
            for a in 0..e {
                let d = c % p;
                c /= p;
                let term = self.mul(self.prime_scalar(d), self.pow(gamma, a as u64));
                acc = self.add(acc, term);
            }
            *slot = index_of(acc);
        }

        let dim = self.degree;
        let mut basis = vec![0u64; dim * dim];
        for i in 0..n {
            for a in 0..e {
                let b = self.mul(self.pow(gamma, a as u64), self.pow(self.omega(), i as u64));
                let col = i * e + a;
                for (row, c) in self.coefficients(b).into_iter().enumerate() {
                    basis[row * dim + col] = c;
                }
            }
        }
        let basis_inv = invert_mod_p(&basis, dim, p).ok_or(Error::InvalidModulus(dim))?;

        let elems = scalar_elements.clone();
        let scalars = ScalarField::from_fns(
            p,
            e,
            |a, b| index_of(self.add(elems[a], elems[b])) as usize,
            |a, b| index_of(self.mul(elems[a], elems[b])) as usize,
        );
        self.scalars = scalars;
        self.coords = CoordinateMap::Extension { basis_inv, scalar_from_digits, scalar_elements };
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn e(&self) -> usize {
        self.e
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn n(&self) -> usize {
        self.n
    }
    /// Degree of the top field over `F_p`.
    pub fn degree(&self) -> usize {
        self.degree
    }
    /// Number of elements of the top field.
    pub fn order(&self) -> u64 {
        self.order
    }
    /// `N = (q^n - 1)/(q^k - 1)`.
    pub fn spread_size(&self) -> u64 {
        self.spread_size
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn scalars(&self) -> &ScalarField {
        &self.scalars
    }

    pub fn descriptor(&self) -> TowerDescriptor {
        TowerDescriptor {
            p: self.p,
            e: self.e,
            k: self.k,
            n: self.n,
            modulus: self.modulus.clone(),
        }
    }

    fn group_order(&self) -> u64 {
        self.order - 1
    }

    pub fn omega(&self) -> FieldElement {
        // the trivial field F_2 has ω = 1
        FieldElement::Pow(if self.group_order() == 1 { 0 } else { 1 })
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::Pow(0)
    }

    /// Element with log index `i` reduced modulo the group order.
    pub fn omega_pow(&self, i: u64) -> FieldElement {
        FieldElement::Pow((i % self.group_order()) as u32)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match (a, b) {
            (FieldElement::Pow(i), FieldElement::Pow(j)) => {
                FieldElement::Pow(((i as u64 + j as u64) % self.group_order()) as u32)
            }
            _ => FieldElement::Zero,
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match (a, b) {
            (FieldElement::Zero, x) | (x, FieldElement::Zero) => x,
            (FieldElement::Pow(i), FieldElement::Pow(j)) => {
                let g = self.group_order();
                let diff = (j as u64 + g - i as u64) % g;
                match self.zech[diff as usize] {
                    NO_LOG => FieldElement::Zero,
                    z => FieldElement::Pow(((i as u64 + z as u64) % g) as u32),
                }
            }
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match a {
            FieldElement::Zero => FieldElement::Zero,
            FieldElement::Pow(i) if self.p == 2 => FieldElement::Pow(i),
            FieldElement::Pow(i) => {
                let g = self.group_order();
                FieldElement::Pow(((i as u64 + g / 2) % g) as u32)
            }
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        match a {
            FieldElement::Zero => Err(Error::ZeroInverse),
            FieldElement::Pow(i) => {
                let g = self.group_order();
                Ok(FieldElement::Pow(((g - i as u64) % g) as u32))
            }
        }
    }

    pub fn pow(&self, a: FieldElement, exponent: u64) -> FieldElement {
        match a {
            FieldElement::Zero if exponent == 0 => self.one(),
            FieldElement::Zero => FieldElement::Zero,
            FieldElement::Pow(i) => {
                let g = self.group_order() as u128;
                FieldElement::Pow(((i as u128 * exponent as u128) % g) as u32)
            }
        }
    }

    /// The `q^r`-Frobenius `x ↦ x^{q^r}`, an `F_q`-linear automorphism.
    pub fn frobenius(&self, a: FieldElement, r: usize) -> FieldElement {
        match a {
            FieldElement::Zero => FieldElement::Zero,
            FieldElement::Pow(i) => {
                let g = self.group_order() as u128;
                let mut f = 1u128;
                for _ in 0..r {
                    f = f * self.q as u128 % g.max(1);
                }
                FieldElement::Pow(((i as u128 * f) % g) as u32)
            }
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Option<u64> {
        let i = a.log()? as u64;
        let g = self.group_order();
        Some(g / gcd(g, i))
    }

    /// Does `a` lie in the subfield with `q^m` elements (requires `m | n`)?
    pub fn in_subfield(&self, a: FieldElement, m: usize) -> bool {
        match a {
            FieldElement::Zero => true,
            FieldElement::Pow(i) => {
                let step = self.group_order() / (self.q.pow(m as u32) - 1);
                (i as u64).is_multiple_of(step)
            }
        }
    }

    /// Embeds an element of the prime field given as a residue.
    pub fn prime_scalar(&self, residue: u64) -> FieldElement {
        let r = residue % self.p;
        if r == 0 {
            FieldElement::Zero
        } else {
            FieldElement::Pow(self.log[r as usize])
        }
    }

    /// Coefficients over `F_p` in the basis `1, ω, …, ω^{en-1}`.
    pub fn coefficients(&self, a: FieldElement) -> Vec<u64> {
        let mut out = vec![0u64; self.degree];
        if let FieldElement::Pow(i) = a {
            let mut code = self.exp[i as usize] as u64;
            for c in out.iter_mut() {
                *c = code % self.p;
                code /= self.p;
            }
        }
        out
    }

    /// Inverse of [`coefficients`](Self::coefficients).
    pub fn from_coefficients(&self, coeffs: &[u64]) -> FieldElement {
        let code = coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c % self.p);
        match self.log[code as usize] {
            NO_LOG => FieldElement::Zero,
            i => FieldElement::Pow(i),
        }
    }

    /// Embeds an `F_q` scalar given by canonical index.
    pub fn scalar_element(&self, c: u8) -> FieldElement {
        match &self.coords {
            CoordinateMap::Prime => self.prime_scalar(c as u64),
            CoordinateMap::Extension { scalar_elements, .. } => scalar_elements[c as usize],
        }
    }

    /// Coordinates `c_0..c_{n-1}` over `F_q` with `a = Σ c_i ω^i`.
    pub fn coords_over_q(&self, a: FieldElement) -> Vec<u8> {
        let coeffs = self.coefficients(a);
        match &self.coords {
            CoordinateMap::Prime => coeffs.into_iter().map(|c| c as u8).collect(),
            CoordinateMap::Extension { basis_inv, scalar_from_digits, .. } => {
                let dim = self.degree;
                let digits: Vec<u64> = (0..dim)
                    .map(|r| {
                        (0..dim).fold(0u64, |acc, c| {
                            (acc + basis_inv[r * dim + c] * coeffs[c]) % self.p
                        })
                    })
                    .collect();
                digits
                    .chunks(self.e)
                    .map(|chunk| {
                        let code = chunk.iter().rev().fold(0u64, |acc, &d| acc * self.p + d);
                        scalar_from_digits[code as usize]
                    })
                    .collect()
            }
        }
    }

    /// Reconstructs `Σ c_i ω^i` by field arithmetic.
    pub fn from_coords_over_q(&self, coords: &[u8]) -> FieldElement {
        coords.iter().enumerate().fold(FieldElement::Zero, |acc, (i, &c)| {
            let term = self.mul(self.scalar_element(c), self.omega_pow(i as u64));
            self.add(acc, term)
        })
    }

    /// `θ = ω^N`, a generator of the multiplicative group of `F_{q^k}`.
    pub fn subfield_generator_qk(&self) -> FieldElement {
        self.omega_pow(self.spread_size)
    }

    /// `1, θ, …, θ^{k-1}`: an `F_q`-basis of `F_{q^k}`.
    pub fn subfield_basis_qk(&self) -> Vec<FieldElement> {
        let theta = self.subfield_generator_qk();
        (0..self.k).map(|j| self.pow(theta, j as u64)).collect()
    }

    /// All `q^k` elements of `F_{q^k}`.
    pub fn subfield_elements_qk(&self) -> Vec<FieldElement> {
        let step = self.spread_size;
        let count = self.q.pow(self.k as u32) - 1;
        std::iter::once(FieldElement::Zero)
            .chain((0..count).map(|j| self.omega_pow(j * step)))
            .collect()
    }
}

fn validate(p: u64, e: usize, k: usize, n: usize, cap: u64) -> Result<(usize, u64)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 || k == 0 || n == 0 {
        return Err(Error::InvalidParameter("e, k and n must be at least 1".into()));
    }
    if !n.is_multiple_of(k) {
        return Err(Error::KDoesNotDivideN { k, n });
    }
    let degree = e * n;
    let too_large = Error::FieldTooLarge { p, degree, cap };
    let order = u32::try_from(degree)
        .ok()
        .and_then(|d| p.checked_pow(d))
        .ok_or(too_large.clone())?;
    if order > cap || order > u32::MAX as u64 {
        return Err(too_large);
    }
    let q = p.pow(e as u32);
    if q > MAX_SCALAR_ORDER {
        return Err(Error::ScalarFieldTooLarge(q));
    }
    Ok((degree, order))
}

fn encode(coeffs: &[u64], p: u64) -> u32 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
}

fn times_x(coeffs: &mut [u64], modulus: &[u64], p: u64) {
    let top = *coeffs.last().unwrap();
    for i in (1..coeffs.len()).rev() {
        coeffs[i] = coeffs[i - 1];
    }
    coeffs[0] = 0;
    if top != 0 {
        for (c, &m) in coeffs.iter_mut().zip(modulus) {
            *c = (*c + (p - m) * top) % p;
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn invert_mod_p(m: &[u64], dim: usize, p: u64) -> Option<Vec<u64>> {
    let w = 2 * dim;
    let mut a = vec![0u64; dim * w];
    for r in 0..dim {
        a[r * w..r * w + dim].copy_from_slice(&m[r * dim..(r + 1) * dim]);
        a[r * w + dim + r] = 1;
    }
    for col in 0..dim {
        let pivot = (col..dim).find(|&r| a[r * w + col] != 0)?;
        for c in 0..w {
            a.swap(pivot * w + c, col * w + c);
        }
        let inv = pow_mod(a[col * w + col], p - 2, p);
        for c in 0..w {
            a[col * w + c] = a[col * w + c] * inv % p;
        }
        for r in 0..dim {
            let f = a[r * w + col];
            if r != col && f != 0 {
                for c in 0..w {
                    a[r * w + c] = (a[r * w + c] + (p - f) * a[col * w + c]) % p;
                }
            }
        }
    }
    Some((0..dim).flat_map(|r| a[r * w + dim..(r + 1) * w].to_vec()).collect())
}

/// The first monic primitive polynomial of the given degree, where
/// candidates are ordered by the integer `Σ c_i p^i` of their lower
/// coefficients (so the high coefficients are compared first).
fn smallest_primitive(p: u64, degree: usize) -> Vec<u64> {
    let count = p.pow(degree as u32);
    for code in 0..count {
        let mut f = Vec::with_capacity(degree + 1);
        let mut c = code;
        for _ in 0..degree {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if f[0] != 0 && poly::is_primitive(&f, p) {
            return f;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

mod poly {
    //! Dense polynomials over `F_p`, coefficients low to high.

    use super::{pow_mod, prime_factors};

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    /// Remainder of `a` modulo a nonzero `b`.
    fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let lead_inv = pow_mod(b[db], p - 2, p);
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let f = r[r.len() - 1] * lead_inv % p;
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - f) * bc % p) % p;
            }
            r = trim(r);
        }
        r
    }

    fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, f, p)
    }

    fn pow_x(exponent: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(&[0, 1], f, p);
        let mut acc = rem(&[1], f, p);
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, f, p);
            }
            base = mul_mod(&base, &base, f, p);
            e >>= 1;
        }
        acc
    }

    /// `x^{p^j} mod f` by repeated `p`-th powers.
    fn frobenius_x(j: usize, f: &[u64], p: u64) -> Vec<u64> {
        let mut h = rem(&[0, 1], f, p);
        for _ in 0..j {
            let mut acc = rem(&[1], f, p);
            let mut base = h.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_mod(&acc, &base, f, p);
                }
                base = mul_mod(&base, &base, f, p);
                e >>= 1;
            }
            h = acc;
        }
        h
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let len = a.len().max(b.len());
        trim(
            (0..len)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's irreducibility test.
    pub(super) fn is_irreducible(f: &[u64], p: u64) -> bool {
        let d = f.len() - 1;
        let x = rem(&[0, 1], f, p);
        if frobenius_x(d, f, p) != x {
            return false;
        }
        prime_factors(d as u64).into_iter().all(|r| {
            let g = sub(&frobenius_x(d / r as usize, f, p), &x, p);
            gcd(f, &g, p).len() == 1
        })
    }

    /// Irreducible with `x` generating the multiplicative group of `F_p[x]/(f)`.
    pub(super) fn is_primitive(f: &[u64], p: u64) -> bool {
        if f[0] == 0 || !is_irreducible(f, p) {
            return false;
        }
        let group = p.pow((f.len() - 1) as u32) - 1;
        let one = rem(&[1], f, p);
        prime_factors(group).into_iter().all(|r| pow_x(group / r, f, p) != one)
    }
}
