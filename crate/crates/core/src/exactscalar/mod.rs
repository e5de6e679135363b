//! Exact arithmetic in cyclotomic fields Q(ζ_L).
//!
//! A [`Scalar`] stores its root-of-unity order `L` and the coefficients of a
//! polynomial in ζ_L reduced modulo the cyclotomic polynomial Φ_L, so the
//! representation at a given order is unique. Values that happen to be
//! rational are always stored at order 1. Mixed-order arithmetic lifts both
//! operands to Q(ζ_lcm).

mod rat;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;

use crate::error::{Error, Result};
pub use rat::Rat;

#[derive(Clone)]
pub struct Scalar {
    order: u32,
    coeffs: Vec<Rat>,
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> usize {
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// Integer coefficients of Φ_n, lowest degree first. Memoized.
pub fn cyclotomic_poly(n: u32) -> Arc<[i64]> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<[i64]>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().expect("cyclotomic cache poisoned").get(&n) {
        return p.clone();
    }
    let poly: Arc<[i64]> = compute_cyclotomic(n).into();
    cache
        .write()
        .expect("cyclotomic cache poisoned")
        .insert(n, poly.clone());
    poly
}

fn compute_cyclotomic(n: u32) -> Vec<i64> {
    assert!(n > 0);
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div_monic(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[i + j] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Reduce a polynomial in ζ_L (arbitrary degree) to canonical coefficients.
fn reduce(mut poly: Vec<Rat>, order: u32) -> Vec<Rat> {
    let l = order as usize;
    if poly.len() > l {
        for i in l..poly.len() {
            if !poly[i].is_zero() {
                let c = std::mem::take(&mut poly[i]);
                poly[i % l] = &poly[i % l] + &c;
            }
        }
        poly.truncate(l);
    }
    let phi = cyclotomic_poly(order);
    let deg = phi.len() - 1;
    for i in (deg..poly.len()).rev() {
        let c = std::mem::take(&mut poly[i]);
        if c.is_zero() {
            continue;
        }
        // x^i = x^(i-deg) * (x^deg - Φ) since Φ is monic
        for (j, &pc) in phi.iter().enumerate().take(deg) {
            if pc != 0 {
                let t = &c * &Rat::int(pc);
                poly[i - deg + j] = &poly[i - deg + j] - &t;
            }
        }
    }
    poly.resize(deg, Rat::ZERO);
    poly
}

impl Scalar {
    fn from_parts(order: u32, coeffs: Vec<Rat>) -> Scalar {
        debug_assert_eq!(coeffs.len(), euler_phi(order));
        if order != 1 && coeffs[1..].iter().all(Rat::is_zero) {
            return Scalar {
                order: 1,
                coeffs: vec![coeffs.into_iter().next().unwrap_or_default()],
            };
        }
        Scalar { order, coeffs }
    }

    pub fn zero() -> Scalar {
        Scalar::from(Rat::ZERO)
    }

    pub fn one() -> Scalar {
        Scalar::from(Rat::ONE)
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::from(Rat::int(n))
    }

    /// ζ_L^k = exp(2πik/L).
    pub fn phase(k: i64, order: u32) -> Result<Scalar> {
        if order == 0 {
            return Err(Error::InvalidOrder);
        }
        let k = k.rem_euclid(order as i64) as u32;
        if k == 0 {
            return Ok(Scalar::one());
        }
        let g = k.gcd(&order);
        let (k, order) = (k / g, order / g);
        let mut poly = vec![Rat::ZERO; k as usize + 1];
        poly[k as usize] = Rat::ONE;
        Ok(Scalar::from_parts(order, reduce(poly, order)))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        (self.order == 1).then(|| &self.coeffs[0])
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    fn lift(&self, target: u32) -> Vec<Rat> {
        if self.order == target {
            return self.coeffs.clone();
        }
        debug_assert_eq!(target % self.order, 0);
        let step = (target / self.order) as usize;
        let mut poly = vec![Rat::ZERO; (self.coeffs.len() - 1) * step + 1];
        for (t, c) in self.coeffs.iter().enumerate() {
            poly[t * step] = c.clone();
        }
        reduce(poly, target)
    }

    fn scale_rat(&self, r: &Rat) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn conj(&self) -> Scalar {
        if self.order == 1 {
            return self.clone();
        }
        let l = self.order as usize;
        let mut poly = vec![Rat::ZERO; l];
        for (t, c) in self.coeffs.iter().enumerate() {
            poly[(l - t) % l] = c.clone();
        }
        Scalar::from_parts(self.order, reduce(poly, self.order))
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Scalar::from(r.recip().ok_or(Error::DivisionByZero)?));
        }
        // Solve (multiplication-by-self matrix) * y = e_0 over Q.
        let d = self.coeffs.len();
        let mut cols = Vec::with_capacity(d);
        for t in 0..d {
            let mut poly = vec![Rat::ZERO; t];
            poly.extend(self.coeffs.iter().cloned());
            cols.push(reduce(poly, self.order));
        }
        let mut aug: Vec<Vec<Rat>> = (0..d)
            .map(|r| {
                let mut row: Vec<Rat> = (0..d).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 { Rat::ONE } else { Rat::ZERO });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d)
                .find(|&r| !aug[r][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            aug.swap(col, piv);
            let inv = aug[col][col].recip().ok_or(Error::DivisionByZero)?;
            for x in aug[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..d {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in col..=d {
                        let t = &f * &aug[col][c];
                        aug[r][c] = &aug[r][c] - &t;
                    }
                }
            }
        }
        let coeffs = aug.into_iter().map(|row| row[d].clone()).collect();
        Ok(Scalar::from_parts(self.order, coeffs))
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Floating-point value, for human-facing debug output only.
    pub fn to_complex(&self) -> (f64, f64) {
        let l = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (t, c)| {
                let theta = 2.0 * std::f64::consts::PI * t as f64 / l;
                let v = c.to_f64();
                (re + v * theta.cos(), im + v * theta.sin())
            })
    }

    fn combine(&self, other: &Scalar, f: impl Fn(&[Rat], &[Rat], u32) -> Vec<Rat>) -> Scalar {
        let order = self.order.lcm(&other.order);
        let a = self.lift(order);
        let b = other.lift(order);
        Scalar::from_parts(order, f(&a, &b, order))
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar {
            order: 1,
            coeffs: vec![r],
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        if self.order == 1 || other.order == 1 {
            // non-rational values are never stored at order 1
            return false;
        }
        let order = self.order.lcm(&other.order);
        self.lift(order) == other.lift(order)
    }
}

impl Eq for Scalar {}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.order == 1 && rhs.order == 1 {
            return Scalar::from(&self.coeffs[0] + &rhs.coeffs[0]);
        }
        self.combine(rhs, |a, b, _| a.iter().zip(b).map(|(x, y)| x + y).collect())
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if rhs.order == 1 {
            return self.scale_rat(&rhs.coeffs[0]);
        }
        if self.order == 1 {
            return rhs.scale_rat(&self.coeffs[0]);
        }
        self.combine(rhs, |a, b, order| {
            let mut poly = vec![Rat::ZERO; a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.iter().enumerate() {
                    if !y.is_zero() {
                        poly[i + j] = &poly[i + j] + &(x * y);
                    }
                }
            }
            reduce(poly, order)
        })
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(&self)
    }
}

/// Rationals render as `p` or `p/q`; anything else as `c*z^k@L` monomials
/// joined by `+`, lowest power first.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            write!(f, "{c}*z^{k}@{}", self.order)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        let bad = || Error::ScalarParse(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        let mut acc = Scalar::zero();
        for term in s.split('+') {
            let term = term.trim();
            let (coeff, mono) = match term.split_once('*') {
                Some((c, m)) => (Rat::parse(c).ok_or_else(bad)?, Some(m.trim())),
                None if term.contains('z') => (Rat::ONE, Some(term)),
                None => (Rat::parse(term).ok_or_else(bad)?, None),
            };
            let value = match mono {
                None => Scalar::from(coeff),
                Some(m) => {
                    let rest = m.strip_prefix("z^").ok_or_else(bad)?;
                    let (k, l) = rest.split_once('@').ok_or_else(bad)?;
                    let k: i64 = k.trim().parse().map_err(|_| bad())?;
                    let l: u32 = l.trim().parse().map_err(|_| bad())?;
                    Scalar::phase(k, l)?.scale_rat(&coeff)
                }
            };
            acc = &acc + &value;
        }
        Ok(acc)
    }
}
