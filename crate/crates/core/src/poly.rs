//! Dense univariate polynomials with big-integer coefficients.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{CInterval, RInterval, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
}

/// Integer polynomial, constant term first. Trailing zeros are trimmed so the
/// last coefficient is the leading one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPoly {
    #[serde(with = "bigint_strings")]
    coeffs: Vec<BigInt>,
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|c| c.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|t| t.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect()
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigInt::zero();
        IntPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Exact value at a rational point.
    pub fn eval_rat(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + Rat::from_integer(c.clone()))
    }

    /// Horner enclosure at a complex enclosure.
    pub fn eval_interval(&self, x: &CInterval, prec: u32) -> CInterval {
        self.coeffs.iter().rev().fold(CInterval::zero(), |acc, c| {
            acc.mul(x, prec)
                .add(&CInterval::real(RInterval::from_rat(&Rat::from_integer(c.clone()), prec)), prec)
        })
    }

    /// `P(x^2)`.
    pub fn compose_square(&self) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.coeffs.len() * 2];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[2 * i] = c.clone();
        }
        IntPoly::new(out)
    }

    /// A primitive integer polynomial vanishing at `a + b·α` whenever `self` vanishes at `α`
    /// (`b ≠ 0`): the numerator of `P((y - a) / b)`.
    pub fn affine_image(&self, a: &Rat, b: &Rat) -> IntPoly {
        assert!(!b.is_zero(), "affine image needs a nonzero scale");
        // (y - a)/b = (d_b * y - d_b * a) / n_b with rational coefficients; expand over Q
        let lin = QPoly::new(vec![-a / b, Rat::one() / b]);
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&QPoly::constant(Rat::from_integer(c.clone())));
        }
        acc.to_primitive_int()
    }

    /// Polynomial vanishing at `1/α` when `self` vanishes at `α ≠ 0`.
    pub fn reciprocal(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        let tz = c.iter().take_while(|v| v.is_zero()).count();
        c.drain(..tz);
        c.reverse();
        IntPoly::new(c).primitive()
    }

    /// Squarefree part, primitive with positive leading coefficient.
    pub fn squarefree(&self) -> IntPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let p = QPoly::from_int(self);
        let g = p.gcd(&p.derivative());
        p.div_exact(&g).to_primitive_int()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl IntPoly {
    /// `P(inner(x))`.
    pub fn compose(&self, inner: &IntPoly) -> IntPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(IntPoly::zero(), |acc, c| acc.mul(inner).add(&IntPoly::constant(c.clone())))
    }

    /// `P(-x)`.
    pub fn negate_var(&self) -> IntPoly {
        self.compose(&IntPoly::from_i64(&[0, -1]))
    }

    /// Remove the factor `x^k` for the largest possible `k`.
    pub fn strip_zero_roots(&self) -> IntPoly {
        let tz = self.coeffs.iter().take_while(|v| v.is_zero()).count();
        IntPoly::new(self.coeffs[tz.min(self.coeffs.len())..].to_vec())
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, other: &IntPoly) -> BigInt {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return BigInt::zero();
        };
        if m == 0 {
            return self.coeffs[0].pow(n as u32);
        }
        if n == 0 {
            return other.coeffs[0].pow(m as u32);
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for r in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                mat[r][r + j] = c.clone();
            }
        }
        for r in 0..m {
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                mat[n + r][r + j] = c.clone();
            }
        }
        bareiss_det(mat)
    }
}

/// Exact determinant by fraction-free elimination.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Eliminate `t` from `P(t) = 0, F(x, t) = 0`: interpolates `Res_t(P, F(x0, ·))`
/// at `deg_x + 1` integer points. `f` must keep a constant leading coefficient in `t`.
pub fn eliminate(p: &IntPoly, f: impl Fn(&BigInt) -> IntPoly, deg_x: usize) -> IntPoly {
    let half = (deg_x / 2) as i64;
    let xs: Vec<Rat> = (0..=deg_x as i64).map(|j| Rat::from_integer(BigInt::from(j - half))).collect();
    let ys: Vec<Rat> = xs.iter().map(|x| Rat::from_integer(p.resultant(&f(x.numer())))).collect();
    // Newton divided differences
    let mut coef = ys.clone();
    for level in 1..xs.len() {
        for i in (level..xs.len()).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut acc = QPoly::zero();
    for i in (0..xs.len()).rev() {
        acc = acc.mul(&QPoly::new(vec![-xs[i].clone(), Rat::one()])).add(&QPoly::constant(coef[i].clone()));
    }
    if acc.is_zero() {
        return IntPoly::zero();
    }
    acc.to_primitive_int()
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Rational-coefficient polynomial, used for gcd and exact division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        QPoly::new(vec![c])
    }

    pub fn from_int(p: &IntPoly) -> Self {
        QPoly::new(p.coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Rat::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead = d.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn div_exact(&self, d: &QPoly) -> QPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    fn monic(&self) -> QPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(l) => {
                let l = l.clone();
                QPoly::new(self.coeffs.iter().map(|c| c / &l).collect())
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            // keep coefficient growth in check
            b = r.monic();
        }
        a.monic()
    }

    /// Clear denominators and divide out the content.
    pub fn to_primitive_int(&self) -> IntPoly {
        let l = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        IntPoly::new(self.coeffs.iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect())
            .primitive()
    }
}

// ---------------------------------------------------------------------------
// rational roots

fn small_primes(limit: u32) -> Vec<u32> {
    let mut sieve = vec![true; limit as usize + 1];
    let mut out = vec![];
    for i in 2..=limit as usize {
        if sieve[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= limit as usize {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

fn mod_pow(b: &BigInt, e: &BigInt, m: &BigInt) -> BigInt {
    b.modpow(e, m)
}

fn is_probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n1: BigInt = n - 1;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    // deterministic below 3.3e24; a strong probable-prime test beyond
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53] {
        let mut x = mod_pow(&BigInt::from(a), &d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt) -> BigInt {
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut x, mut y, mut d) = (BigInt::from(2), BigInt::from(2), BigInt::one());
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization of `|n|` as (prime, multiplicity) pairs.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out: Vec<(BigInt, u32)> = vec![];
    if n.is_zero() {
        return out;
    }
    for p in small_primes(1 << 12) {
        let pb = BigInt::from(p);
        let mut k = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            k += 1;
        }
        if k > 0 {
            out.push((pb, k));
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if m < BigInt::from(1u64 << 24) || is_probable_prime(&m) {
            match out.iter_mut().find(|(p, _)| p == &m) {
                Some(e) => e.1 += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    out
}

/// All positive divisors of `|n|`, ascending.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divs = vec![BigInt::one()];
    for (p, k) in factor(n) {
        let mut next = Vec::with_capacity(divs.len() * (k as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=k {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Every rational root of `p`, each verified by exact evaluation.
pub fn rational_root_scan(p: &IntPoly) -> Result<Vec<Rat>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut roots = vec![];
    let tz = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    if tz > 0 {
        roots.push(Rat::zero());
    }
    let q = IntPoly::new(p.coeffs[tz..].to_vec()).squarefree();
    if q.degree().unwrap_or(0) == 0 {
        return Ok(roots);
    }
    let a0 = q.coeffs[0].clone();
    let an = q.leading().unwrap().clone();
    // Cauchy bound on |root|
    let bound = q.coeffs.iter().map(|c| Rat::new(c.abs(), an.abs())).max().unwrap() + Rat::one();
    let p_one = q.eval_rat(&Rat::one()).to_integer();
    let p_mone = q.eval_rat(&-Rat::one()).to_integer();
    let nums = divisors(&a0);
    let dens = divisors(&an);
    for den in &dens {
        for num in &nums {
            if !num.gcd(den).is_one() {
                continue;
            }
            if Rat::new(num.clone(), den.clone()) > bound {
                continue;
            }
            for sign in [Sign::Plus, Sign::Minus] {
                let pn = if sign == Sign::Plus { num.clone() } else { -num };
                // (den*x - pn) | q implies (den - pn) | q(1) and (den + pn) | q(-1)
                let d1 = den - &pn;
                if !d1.is_zero() && !(&p_one % &d1).is_zero() {
                    continue;
                }
                let d2 = den + &pn;
                if !d2.is_zero() && !(&p_mone % &d2).is_zero() {
                    continue;
                }
                let c = Rat::new(pn, den.clone());
                if q.eval_rat(&c).is_zero() {
                    roots.push(c);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}
