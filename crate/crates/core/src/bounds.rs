//! Exact evaluation of the closed-form bounds on partial parallelisms.
//!
//! Everything here is arbitrary precision; no floating point is used, and
//! decimal renderings are produced from the exact rationals on demand.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, FieldTower, DEFAULT_TABLE_CAP};
use crate::linalg::Matrix;

/// Default cap on the number of semilinear maps enumerated per subgroup.
pub const DEFAULT_SEMILINEAR_CAP: u128 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaId {
    Upper,
    Thm31,
    Thm32,
    Thm33,
    Cor34,
}

impl FormulaId {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::Upper => "upper",
            FormulaId::Thm31 => "thm31",
            FormulaId::Thm32 => "thm32",
            FormulaId::Thm33 => "thm33",
            FormulaId::Cor34 => "cor34",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub label: String,
    pub value: BigRational,
}

/// One evaluated bound on `P(n, k, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub formula: FormulaId,
    pub n: usize,
    pub k: usize,
    pub q: u64,
    pub value: BigRational,
    /// `floor(value) + 1` for strict bounds, `ceil(value)` otherwise.
    pub integer_bound: BigInt,
    pub strict: bool,
    pub terms: Vec<Term>,
    /// Non-integral intermediates and other anomalies, never auto-corrected.
    pub flags: Vec<String>,
}

impl BoundReport {
    fn new(formula: FormulaId, n: usize, k: usize, q: u64, value: BigRational, strict: bool) -> Self {
        let integer_bound = integer_bound(&value, strict);
        BoundReport { formula, n, k, q, value, integer_bound, strict, terms: Vec::new(), flags: Vec::new() }
    }

    pub fn record(&self) -> BoundRecord {
        BoundRecord {
            formula_id: self.formula,
            n: self.n,
            k: self.k,
            q: self.q,
            numerator: self.value.numer().to_string(),
            denominator: self.value.denom().to_string(),
            integer_bound: self.integer_bound.to_string(),
            strict: self.strict,
            approx: approx_decimal(&self.value, 6),
            terms: self
                .terms
                .iter()
                .map(|t| TermRecord { label: t.label.clone(), value: t.value.to_string() })
                .collect(),
            flags: self.flags.clone(),
        }
    }
}

/// Machine-readable form of a [`BoundReport`]; integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub formula_id: FormulaId,
    pub n: usize,
    pub k: usize,
    pub q: u64,
    pub numerator: String,
    pub denominator: String,
    pub integer_bound: String,
    pub strict: bool,
    /// Decimal rendering, approximate.
    pub approx: String,
    pub terms: Vec<TermRecord>,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub label: String,
    pub value: String,
}

pub fn integer_bound(value: &BigRational, strict: bool) -> BigInt {
    if strict {
        value.floor().to_integer() + 1
    } else {
        value.ceil().to_integer()
    }
}

/// Decimal expansion truncated toward zero to `places` digits.
pub fn approx_decimal(value: &BigRational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = (value.abs() * BigRational::from_integer(scale.clone())).trunc().to_integer();
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if value.is_negative() { "-" } else { "" };
    format!("{sign}{int}.{frac:0>places$}")
}

/// `(p, e)` with `q = p^e`.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1 && is_prime(p)).then_some((p, e))
}

fn check_q(q: u64) -> Result<()> {
    prime_power(q)
        .map(|_| ())
        .ok_or_else(|| Error::InvalidParameter(format!("q = {q} is not a prime power")))
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn qpow(q: u64, e: usize) -> BigUint {
    big(q).pow(e as u32)
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The Gaussian coefficient `[n, k]_q`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> Result<BigUint> {
    if k > n || q < 2 {
        return Err(Error::InvalidParameter(format!("[{n}, {k}]_{q} is out of range")));
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= qpow(q, n - i) - 1u32;
        den *= qpow(q, i + 1) - 1u32;
    }
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// `|GL(n, q)| = Π_{i<n} (q^n − q^i)`; the empty product for `n = 0`.
pub fn gl_order(n: usize, q: u64) -> BigUint {
    let qn = qpow(q, n);
    (0..n).fold(BigUint::one(), |acc, i| acc * (&qn - qpow(q, i)))
}

/// `[n]_j = n(n−1)⋯(n−j+1)`.
pub fn falling_factorial(n: &BigInt, j: usize) -> BigInt {
    (0..j).fold(BigInt::one(), |acc, i| acc * (n - BigInt::from(i)))
}

fn check_divides(n: usize, k: usize) -> Result<()> {
    if k == 0 || !n.is_multiple_of(k) {
        Err(Error::KDoesNotDivideN { k, n })
    } else {
        Ok(())
    }
}

fn check_proper(n: usize, k: usize) -> Result<()> {
    check_divides(n, k)?;
    if k == n {
        return Err(Error::InvalidParameter(format!("lower bounds need k < n (k = n = {n})")));
    }
    Ok(())
}

fn spread_count(n: usize, k: usize, q: u64) -> BigUint {
    (qpow(q, n) - 1u32) / (qpow(q, k) - 1u32)
}

/// `P(n, k, q) ≤ [n−1, k−1]_q`.
pub fn upper_bound(n: usize, k: usize, q: u64) -> Result<BoundReport> {
    check_divides(n, k)?;
    check_q(q)?;
    let v = gaussian_binomial(n - 1, k - 1, q)?;
    Ok(BoundReport::new(FormulaId::Upper, n, k, q, ratio(v, BigUint::one()), false))
}

/// `|GL(n, q)| / |∪ S_ij|` for an exactly counted union.
pub fn bound_thm31(n: usize, k: usize, q: u64, union_size: &BigUint) -> Result<BoundReport> {
    check_divides(n, k)?;
    check_q(q)?;
    if union_size.is_zero() {
        return Err(Error::InvalidParameter("union size must be positive".into()));
    }
    let mut r = BoundReport::new(
        FormulaId::Thm31,
        n,
        k,
        q,
        ratio(gl_order(n, q), union_size.clone()),
        false,
    );
    r.terms.push(Term { label: "union_size".into(), value: ratio(union_size.clone(), BigUint::one()) });
    Ok(r)
}

/// Lower bound with the scalar over-count removed from `Σ |S_ij|`.
pub fn bound_thm33(n: usize, k: usize, q: u64) -> Result<BoundReport> {
    check_proper(n, k)?;
    check_q(q)?;
    let big_n = spread_count(n, k, q);
    let transport_sum =
        &big_n * &big_n * qpow(q, k * (n - k)) * gl_order(k, q) * gl_order(n - k, q);
    let qn1 = qpow(q, n) - 1u32;
    let overcount = ratio(&qn1 * &qn1, qpow(q, k) - 1u32);
    let denom = BigRational::from_integer(BigInt::from(transport_sum.clone())) - &overcount
        + BigRational::from_integer(BigInt::from(qn1.clone()));
    let value = BigRational::from_integer(BigInt::from(gl_order(n, q))) / &denom;
    let mut r = BoundReport::new(FormulaId::Thm33, n, k, q, value, false);
    r.terms = vec![
        Term { label: "transporter_sum".into(), value: ratio(transport_sum, BigUint::one()) },
        Term { label: "scalar_overcount".into(), value: -overcount },
        Term { label: "scalar_once".into(), value: ratio(qn1, BigUint::one()) },
        Term { label: "denominator".into(), value: denom.clone() },
    ];
    if !denom.is_integer() {
        r.flags.push(format!("denominator {denom} is not an integer"));
    }
    Ok(r)
}

/// `P(n, k, q) > (q^k − 1)/(q^n − 1) · [n−1, k−1]_q`.
pub fn bound_cor34(n: usize, k: usize, q: u64) -> Result<BoundReport> {
    check_proper(n, k)?;
    check_q(q)?;
    let value = ratio(qpow(q, k) - 1u32, qpow(q, n) - 1u32)
        * BigRational::from_integer(BigInt::from(gaussian_binomial(n - 1, k - 1, q)?));
    Ok(BoundReport::new(FormulaId::Cor34, n, k, q, value, true))
}

/// Cardinality of the union, over divisors `m` of `k` that are proper
/// multiples of `l`, of the semilinear groups `ΓL(k/m, q^m)` realized as
/// `F_q`-matrices acting on `F_{q^k}`.
///
/// Each group is enumerated element by element as `x ↦ ψ(x^{q^r})` with `ψ`
/// an `F_{q^m}`-linear bijection and `0 ≤ r < m`.
pub fn semilinear_union_order(k: usize, q: u64, l: usize, cap: u128) -> Result<BigUint> {
    Ok(BigUint::from(semilinear_union(k, q, l, cap)?.len()))
}

/// The matrices counted by [`semilinear_union_order`].
pub fn semilinear_union(k: usize, q: u64, l: usize, cap: u128) -> Result<HashSet<Matrix>> {
    let (p, e) = prime_power(q)
        .ok_or_else(|| Error::InvalidParameter(format!("q = {q} is not a prime power")))?;
    if l == 0 || !k.is_multiple_of(l) {
        return Err(Error::InvalidParameter(format!("l = {l} does not divide k = {k}")));
    }
    let mut union = HashSet::new();
    let multiples: Vec<usize> = (l + 1..=k).filter(|m| k.is_multiple_of(*m) && m % l == 0).collect();
    if multiples.is_empty() {
        return Ok(union);
    }
    let tower = FieldTower::build_with_cap(p, e, 1, k, DEFAULT_TABLE_CAP)?;
    for m in multiples {
        union.extend(semilinear_group(&tower, m, cap)?);
    }
    Ok(union)
}

/// `ΓL(k/m, q^m)` inside `GL(k, q)`, where the tower's top field is `F_{q^k}`.
pub fn semilinear_group(tower: &FieldTower, m: usize, cap: u128) -> Result<HashSet<Matrix>> {
    let k = tower.n();
    let q = tower.q();
    let f = tower.scalars();
    let dim = k / m;
    let tuples = (q as u128).pow(k as u32).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if tuples.saturating_mul(m as u128) > cap {
        return Err(Error::BudgetExceeded { count: tuples.saturating_mul(m as u128), budget: cap });
    }
    let order = tower.order() - 1;
    let gamma = tower.omega_pow(order / (q.pow(m as u32) - 1));
    // F_q-basis γ^a ω^t of F_{q^k}; column a + m·t
    let mut product_basis = Matrix::zeros(k, k);
    for t in 0..dim {
        for a in 0..m {
            let b = tower.mul(tower.pow(gamma, a as u64), tower.omega_pow(t as u64));
            for (i, c) in tower.coords_over_q(b).into_iter().enumerate() {
                product_basis.set(i, a + m * t, c);
            }
        }
    }
    let basis_inv = product_basis.inverse(f)?;
    let frobenius: Vec<Matrix> = (0..m)
        .map(|r| {
            let mut fr = Matrix::zeros(k, k);
            for j in 0..k {
                let img = tower.frobenius(tower.omega_pow(j as u64), r);
                for (i, c) in tower.coords_over_q(img).into_iter().enumerate() {
                    fr.set(i, j, c);
                }
            }
            fr
        })
        .collect();

    let elements: Vec<_> = std::iter::once(crate::field::FieldElement::Zero)
        .chain((0..order).map(|i| tower.omega_pow(i)))
        .collect();
    let mut group = HashSet::new();
    let mut images = vec![0usize; dim];
    loop {
        // ψ(γ^a ω^t) = γ^a·y_t
        let mut cols = Matrix::zeros(k, k);
        for (t, &y) in images.iter().enumerate() {
            for a in 0..m {
                let v = tower.mul(tower.pow(gamma, a as u64), elements[y]);
                for (i, c) in tower.coords_over_q(v).into_iter().enumerate() {
                    cols.set(i, a + m * t, c);
                }
            }
        }
        if cols.is_invertible(f) {
            let psi = cols.mul(&basis_inv, f)?;
            for fr in &frobenius {
                group.insert(psi.mul(fr, f)?);
            }
        }
        // next tuple
        let mut t = 0;
        loop {
            if t == dim {
                return Ok(group);
            }
            images[t] += 1;
            if images[t] < elements.len() {
                break;
            }
            images[t] = 0;
            t += 1;
        }
    }
}

/// `L` evaluated term by term exactly as printed, for `n = 2k`, and the
/// bound `|GL(2k, q)| / L`.
pub fn bound_thm32_l(k: usize, q: u64, cap: u128) -> Result<BoundReport> {
    check_q(q)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let n = 2 * k;
    let big_n = BigInt::from(spread_count(n, k, q));
    let glk = BigInt::from(gl_order(k, q));
    let one = BigInt::one();
    let two = BigInt::from(2);
    let n1 = &big_n * (&big_n - &one);
    let n2 = &n1 * (&big_n - &two);
    let int = |x: BigInt| BigRational::from_integer(x);
    let mut flags = Vec::new();
    let mut check = |label: &str, v: &BigRational| {
        if !v.is_integer() {
            flags.push(format!("{label} = {v} is not an integer"));
        }
    };

    let term1 = int(&big_n * &big_n * BigInt::from(qpow(q, k * k)) * &glk * &glk);
    let term2 = -int(&n1 * &n1 * &glk * &glk) / int(two.clone());
    check("term2", &term2);
    let term3 = int(&n2 * &n2 * &glk) / int(BigInt::from(6));
    check("term3", &term3);

    // Σ_{l|k} (|GL(k/l, q^l)| − |∪ ΓL|)·l, kept per l since [q^l − 2]_{i−3} depends on l
    let mut inner = Vec::new();
    for l in (1..=k).filter(|l| k.is_multiple_of(*l)) {
        let gl = BigInt::from(gl_order(k / l, q.pow(l as u32)));
        let union = BigInt::from(semilinear_union_order(k, q, l, cap)?);
        inner.push((l, gl - union));
    }
    let big_n_usize = big_n.to_usize().unwrap_or(usize::MAX);
    let mut tail = BigRational::zero();
    let mut tail_terms = Vec::new();
    let mut factorial = BigInt::from(6);
    let mut i = 4;
    while i <= big_n_usize {
        factorial *= BigInt::from(i);
        let s: BigInt = inner
            .iter()
            .map(|(l, d)| {
                let ql2 = BigInt::from(q.pow(*l as u32)) - &two;
                d * BigInt::from(*l) * falling_factorial(&ql2, i - 3)
            })
            .sum();
        if s.is_zero() {
            // every falling factorial has hit zero; all later terms vanish too
            let exhausted = inner.iter().all(|(l, _)| i - 3 > (q.pow(*l as u32) - 2) as usize);
            if exhausted {
                break;
            }
        }
        let sign = if i % 2 == 0 { -1 } else { 1 };
        let t = int(BigInt::from(sign) * &n2 * &n2 * s) / int(factorial.clone());
        check(&format!("tail[{i}]"), &t);
        tail += &t;
        tail_terms.push(Term { label: format!("tail[{i}]"), value: t });
        i += 1;
    }

    let l_value = &term1 + &term2 + &term3 + &tail;
    if !l_value.is_positive() {
        flags.push(format!("L = {l_value} is not positive"));
    }
    let value = if l_value.is_zero() {
        BigRational::zero()
    } else {
        int(BigInt::from(gl_order(n, q))) / &l_value
    };
    let mut r = BoundReport::new(FormulaId::Thm32, n, k, q, value, false);
    r.terms = vec![
        Term { label: "term1".into(), value: term1 },
        Term { label: "term2".into(), value: term2 },
        Term { label: "term3".into(), value: term3 },
        Term { label: "tail".into(), value: tail },
    ];
    r.terms.extend(tail_terms);
    r.terms.push(Term { label: "L".into(), value: l_value });
    r.flags = flags;
    Ok(r)
}

/// The `L` term of a [`FormulaId::Thm32`] report.
pub fn thm32_l_value(report: &BoundReport) -> Option<&BigRational> {
    report.terms.iter().find(|t| t.label == "L").map(|t| &t.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian_binomial(7, 0, 3).unwrap(), big(1));
        assert_eq!(gaussian_binomial(4, 2, 2).unwrap(), big(35));
        assert_eq!(gaussian_binomial(5, 2, 2).unwrap(), big(155));
        assert_eq!(gaussian_binomial(3, 1, 3).unwrap(), big(13));
        assert!(gaussian_binomial(2, 3, 2).is_err());
        assert!(gaussian_binomial(2, 1, 1).is_err());
    }

    #[test]
    fn pascal_recurrence() {
        for q in [2u64, 3, 4] {
            for n in 1..=8 {
                for k in 1..n {
                    let lhs = gaussian_binomial(n, k, q).unwrap();
                    let rhs = qpow(q, k) * gaussian_binomial(n - 1, k, q).unwrap()
                        + gaussian_binomial(n - 1, k - 1, q).unwrap();
                    assert_eq!(lhs, rhs, "[{n},{k}]_{q}");
                }
            }
        }
    }

    #[test]
    fn gl_order_examples() {
        for q in [2u64, 3, 5, 7] {
            assert_eq!(gl_order(1, q), big(q - 1));
        }
        assert_eq!(gl_order(4, 2), big(20160));
        assert_eq!(gl_order(4, 3), big(80 * 78 * 72 * 54));
        assert_eq!(gl_order(4, 3), big(24261120));
        assert_eq!(gl_order(0, 2), big(1));
        for n in 1..5 {
            assert_eq!(
                gl_order(n, 2).to_u128(),
                crate::linalg::gl_count(n, 2),
            );
        }
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(&BigInt::from(17), 0), BigInt::one());
        assert_eq!(falling_factorial(&BigInt::from(5), 2), BigInt::from(20));
        assert_eq!(falling_factorial(&BigInt::from(2), 3), BigInt::zero());
        for base in 0..8i64 {
            for j in 0..6usize {
                let mut acc = 1i64;
                for i in 0..j as i64 {
                    acc *= base - i;
                }
                assert_eq!(falling_factorial(&BigInt::from(base), j), BigInt::from(acc));
            }
        }
    }

    #[test]
    fn upper_examples() {
        assert_eq!(upper_bound(4, 2, 2).unwrap().value, rat(7, 1));
        assert_eq!(upper_bound(6, 3, 2).unwrap().value, rat(155, 1));
        assert_eq!(upper_bound(5, 5, 3).unwrap().value, rat(1, 1));
        assert_eq!(upper_bound(5, 2, 2).unwrap_err(), Error::KDoesNotDivideN { k: 2, n: 5 });
        // [3,1]_2 = |G_2(4,2)| / N = 35 / 5
        assert_eq!(
            upper_bound(4, 2, 2).unwrap().value,
            rat(gaussian_binomial(4, 2, 2).unwrap().to_i64().unwrap(), 5)
        );
    }

    #[test]
    fn thm33_examples() {
        let r = bound_thm33(4, 2, 2).unwrap();
        assert_eq!(r.value, rat(336, 239));
        assert_eq!(r.value, rat(20160, 14340));
        assert_eq!(r.integer_bound, BigInt::from(2));
        assert!(!r.strict);
        let r = bound_thm33(4, 2, 3).unwrap();
        assert_eq!(r.value, rat(24261120, 18661680));
        assert_eq!(r.integer_bound, BigInt::from(2));
        assert!(bound_thm33(4, 4, 2).is_err());
        assert!(bound_thm33(5, 2, 2).is_err());
    }

    #[test]
    fn cor34_examples() {
        let r = bound_cor34(4, 2, 2).unwrap();
        assert_eq!((r.value.clone(), r.integer_bound.clone()), (rat(7, 5), BigInt::from(2)));
        let r = bound_cor34(6, 3, 2).unwrap();
        assert_eq!((r.value.clone(), r.integer_bound.clone()), (rat(1085, 63), BigInt::from(18)));
        let r = bound_cor34(6, 2, 2).unwrap();
        assert_eq!((r.value.clone(), r.integer_bound.clone()), (rat(31, 21), BigInt::from(2)));
        assert!(r.strict);
    }

    #[test]
    fn integer_bound_rules() {
        assert_eq!(integer_bound(&rat(2, 1), true), BigInt::from(3));
        assert_eq!(integer_bound(&rat(2, 1), false), BigInt::from(2));
        assert_eq!(integer_bound(&rat(7, 5), false), BigInt::from(2));
        assert_eq!(integer_bound(&rat(7, 5), true), BigInt::from(2));
    }

    #[test]
    fn approx_rendering() {
        assert_eq!(approx_decimal(&rat(336, 239), 6), "1.405857");
        assert_eq!(approx_decimal(&rat(7, 5), 6), "1.400000");
        assert_eq!(approx_decimal(&rat(-1, 3), 3), "-0.333");
    }

    #[test]
    fn bound_ordering() {
        for q in [2u64, 3] {
            for n in 2..=8 {
                for k in (1..n).filter(|k| n % k == 0) {
                    let c = bound_cor34(n, k, q).unwrap().value;
                    let t = bound_thm33(n, k, q).unwrap().value;
                    let u = upper_bound(n, k, q).unwrap().value;
                    assert!(c < t && t <= u, "({n},{k},{q})");
                }
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn semilinear_examples() {
        // k prime, l = k: no proper multiples
        assert_eq!(semilinear_union_order(3, 2, 3, DEFAULT_SEMILINEAR_CAP).unwrap(), big(0));
        // x ↦ a·x^{2^r} on F_4: 3·2 = 6 maps, all of GL(2,2)
        let u = semilinear_union(2, 2, 1, DEFAULT_SEMILINEAR_CAP).unwrap();
        assert_eq!(u.len(), 6);
        let f = crate::field::ScalarField::prime(2).unwrap();
        assert!(u.iter().all(|m| m.is_invertible(&f)));
    }

    #[test]
    fn semilinear_group_orders() {
        // |ΓL(k/m, q^m)| = |GL(k/m, q^m)|·m, as distinct matrices
        for (q, k) in [(2u64, 2usize), (2, 4), (3, 2), (2, 3), (2, 6), (4, 2)] {
            let (p, e) = prime_power(q).unwrap();
            let tower = FieldTower::build(p, e, 1, k).unwrap();
            for m in (1..=k).filter(|m| k % m == 0) {
                let g = semilinear_group(&tower, m, DEFAULT_SEMILINEAR_CAP);
                let Ok(g) = g else { continue };
                let expected = gl_order(k / m, q.pow(m as u32)) * big(m as u64);
                assert_eq!(big(g.len() as u64), expected, "q={q} k={k} m={m}");
            }
        }
    }

    #[test]
    fn thm32_terms_k2_q2() {
        let r = bound_thm32_l(2, 2, DEFAULT_SEMILINEAR_CAP).unwrap();
        let term = |label: &str| r.terms.iter().find(|t| t.label == label).unwrap().value.clone();
        assert_eq!(term("term1"), rat(14400, 1));
        assert_eq!(term("term2"), rat(-7200, 1));
        assert_eq!(term("term3"), rat(3600, 1));
        // l = 1 contributes (6 − 6)·1, l = 2 contributes 3·2·[2]_{i−3}
        assert_eq!(term("tail[4]"), rat(-1800, 1));
        assert_eq!(term("tail[5]"), rat(360, 1));
        assert_eq!(thm32_l_value(&r), Some(&rat(9360, 1)));
        assert_eq!(r.value, rat(20160, 9360));
        assert!(r.flags.is_empty());
    }

    #[test]
    fn json_record_uses_strings() {
        let rec = bound_thm33(4, 2, 2).unwrap().record();
        let v = serde_json::to_value(&rec).unwrap();
        assert_eq!(v["formula_id"], "thm33");
        assert_eq!(v["numerator"], "336");
        assert_eq!(v["denominator"], "239");
        assert_eq!(v["integer_bound"], "2");
    }
}
