//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A polynomial stores the sorted list of variables it actually uses and a map
//! from dense exponent vectors (aligned with that list) to nonzero
//! coefficients. Unused variables are always trimmed, so two polynomials are
//! equal exactly when their term maps are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::var::Var;

/// Exponent vector with its total degree cached. The derived ordering is
/// graded-lex: total degree first, then lexicographic with the first variable
/// most significant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Mono {
    pub(crate) deg: u32,
    pub(crate) exps: Vec<u32>,
}

impl Mono {
    pub(crate) fn new(exps: Vec<u32>) -> Self {
        Mono {
            deg: exps.iter().sum(),
            exps,
        }
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono {
            deg: self.deg + other.deg,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn divides(&self, other: &Mono) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Mono) -> Mono {
        Mono {
            deg: self.deg - other.deg,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: Vec<Var>,
    terms: BTreeMap<Mono, BigRational>,
}

impl Default for MPoly {
    fn default() -> Self {
        MPoly::zero()
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn union_vars(a: &[Var], b: &[Var]) -> Vec<Var> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => match x.cmp(y) {
                Ordering::Less => {
                    out.push(*x);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(*y);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(*x);
                    i += 1;
                    j += 1;
                }
            },
            (Some(x), None) => {
                out.push(*x);
                i += 1;
            }
            (None, Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        MPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::new(Vec::new()), c);
        }
        MPoly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn from_int(c: i64) -> Self {
        MPoly::constant(rat(c))
    }

    pub fn var(v: Var) -> Self {
        MPoly::monomial(BigRational::one(), &[(v, 1)])
    }

    /// `c * ∏ v^e`; repeated variables are accumulated.
    pub fn monomial(c: BigRational, powers: &[(Var, u32)]) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        let mut acc: BTreeMap<Var, u32> = BTreeMap::new();
        for &(v, e) in powers {
            if e > 0 {
                *acc.entry(v).or_default() += e;
            }
        }
        let vars: Vec<Var> = acc.keys().copied().collect();
        let exps: Vec<u32> = acc.values().copied().collect();
        let mut terms = BTreeMap::new();
        terms.insert(Mono::new(exps), c);
        MPoly { vars, terms }
    }

    /// Builds a polynomial from sparse terms, combining duplicates.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<(Var, u32)>, BigRational)>,
    {
        let mut out = MPoly::zero();
        for (powers, c) in terms {
            out = &out + &MPoly::monomial(c, &powers);
        }
        out
    }

    pub(crate) fn from_raw(vars: Vec<Var>, terms: BTreeMap<Mono, BigRational>) -> Self {
        let mut p = MPoly { vars, terms };
        p.terms.retain(|_, c| !c.is_zero());
        p.trim();
        p
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_value().is_one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant coefficient.
    pub fn constant_value(&self) -> BigRational {
        self.terms
            .get(&Mono::new(vec![0; self.vars.len()]))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Terms in descending graded-lex order as `(powers, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<(Var, u32)>, &BigRational)> + '_ {
        self.terms.iter().rev().map(move |(m, c)| {
            let powers = self
                .vars
                .iter()
                .zip(&m.exps)
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| (*v, e))
                .collect();
            (powers, c)
        })
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.deg).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        match self.var_index(v) {
            Some(i) => self.terms.keys().map(|m| m.exps[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.deg);
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => true,
        }
    }

    /// Leading coefficient in graded-lex order.
    pub fn leading_coefficient(&self) -> BigRational {
        self.terms
            .last_key_value()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Exponents of the graded-lex leading monomial.
    pub fn leading_powers(&self) -> Vec<(Var, u32)> {
        self.terms().next().map(|(p, _)| p).unwrap_or_default()
    }

    pub(crate) fn var_index(&self, v: Var) -> Option<usize> {
        self.vars.binary_search(&v).ok()
    }

    fn trim(&mut self) {
        let n = self.vars.len();
        let used: Vec<bool> = (0..n)
            .map(|i| self.terms.keys().any(|m| m.exps[i] > 0))
            .collect();
        if used.iter().all(|&u| u) {
            return;
        }
        let vars = self
            .vars
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(v, _)| *v)
            .collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(m, c)| {
                let exps = m
                    .exps
                    .iter()
                    .zip(&used)
                    .filter(|(_, &u)| u)
                    .map(|(e, _)| *e)
                    .collect();
                (Mono::new(exps), c)
            })
            .collect();
        self.vars = vars;
        self.terms = terms;
    }

    /// Re-expresses the terms over a superset of the variables.
    fn aligned(&self, vars: &[Var]) -> BTreeMap<Mono, BigRational> {
        if self.vars == vars {
            return self.terms.clone();
        }
        let pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.binary_search(v).expect("variable superset"))
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0; vars.len()];
                for (i, &e) in m.exps.iter().enumerate() {
                    exps[pos[i]] = e;
                }
                (Mono { deg: m.deg, exps }, c.clone())
            })
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut result = MPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if divisor.is_constant() {
            return Some(self.scale(&divisor.constant_value().recip()));
        }
        if divisor.vars.iter().any(|v| self.var_index(*v).is_none()) {
            return None;
        }
        let vars = self.vars.clone();
        let d = divisor.aligned(&vars);
        let (lm, lc) = d.last_key_value().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<Mono, BigRational> = BTreeMap::new();
        while let Some((m, c)) = rem.last_key_value() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(&lm);
            let qc = c / &lc;
            for (dm, dc) in &d {
                let key = dm.mul(&qm);
                let entry = rem.entry(key.clone()).or_insert_with(BigRational::zero);
                *entry -= dc * &qc;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.insert(qm, qc);
        }
        Some(MPoly::from_raw(vars, quot))
    }

    /// Coefficients with respect to `v`: `self = Σ_k out[k] · v^k`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MPoly> {
        let Some(idx) = self.var_index(v) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<BTreeMap<Mono, BigRational>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exps[idx] as usize;
            let mut exps = m.exps.clone();
            exps[idx] = 0;
            buckets[k].insert(Mono::new(exps), c.clone());
        }
        buckets
            .into_iter()
            .map(|t| MPoly::from_raw(self.vars.clone(), t))
            .collect()
    }

    /// Inverse of [`MPoly::coeffs_in`].
    pub fn from_coeffs_in(v: Var, coeffs: &[MPoly]) -> MPoly {
        let x = MPoly::var(v);
        let mut out = MPoly::zero();
        for c in coeffs.iter().rev() {
            out = &(&out * &x) + c;
        }
        out
    }

    /// Multiplies by `∏ v^e`.
    pub fn mul_monomial(&self, powers: &[(Var, u32)]) -> MPoly {
        self * &MPoly::monomial(BigRational::one(), powers)
    }

    /// Largest monomial dividing every term (`[]` for zero).
    pub fn monomial_content(&self) -> Vec<(Var, u32)> {
        if self.is_zero() {
            return Vec::new();
        }
        self.vars
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, self.terms.keys().map(|m| m.exps[i]).min().unwrap()))
            .filter(|(_, e)| *e > 0)
            .collect()
    }

    /// Divides by a monomial that must divide every term.
    pub fn div_monomial(&self, powers: &[(Var, u32)]) -> MPoly {
        if powers.is_empty() {
            return self.clone();
        }
        let mut sub = vec![0u32; self.vars.len()];
        for (v, e) in powers {
            let i = self.var_index(*v).expect("monomial divides polynomial");
            sub[i] += e;
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let exps: Vec<u32> = m.exps.iter().zip(&sub).map(|(a, b)| a - b).collect();
                (Mono::new(exps), c.clone())
            })
            .collect();
        MPoly::from_raw(self.vars.clone(), terms)
    }

    /// Substitutes a constant for one variable.
    pub fn eval_var(&self, v: Var, value: &BigRational) -> MPoly {
        let coeffs = self.coeffs_in(v);
        let mut out = MPoly::zero();
        for c in coeffs.iter().rev() {
            out = &out.scale(value) + c;
        }
        out
    }

    pub fn derivative(&self, v: Var) -> MPoly {
        let Some(idx) = self.var_index(v) else {
            return MPoly::zero();
        };
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps[idx] > 0)
            .map(|(m, c)| {
                let mut exps = m.exps.clone();
                let e = exps[idx];
                exps[idx] -= 1;
                (Mono::new(exps), c * rat(e as i64))
            })
            .collect();
        MPoly::from_raw(self.vars.clone(), terms)
    }

    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Whether every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Scales to make the graded-lex leading coefficient 1.
    pub fn monic(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        self.scale(&self.leading_coefficient().recip())
    }

    /// Writes the polynomial with terms in descending (default) or ascending
    /// graded-lex order.
    pub fn fmt_ordered(&self, f: &mut impl fmt::Write, ascending: bool) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<_> = if ascending {
            let mut t: Vec<_> = self.terms().collect();
            t.reverse();
            t
        } else {
            self.terms().collect()
        };
        for (i, (powers, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            let mut first = true;
            if !a.is_one() || powers.is_empty() {
                write!(f, "{a}")?;
                first = false;
            }
            for (v, e) in powers {
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                if *e == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.fmt_ordered(&mut s, false)?;
        f.write_str(&s)
    }
}

impl Add for &MPoly {
    type Output = MPoly;

    fn add(self, rhs: &MPoly) -> MPoly {
        let vars = union_vars(&self.vars, &rhs.vars);
        let mut terms = self.aligned(&vars);
        for (m, c) in rhs.aligned(&vars) {
            match terms.get_mut(&m) {
                Some(x) => {
                    *x += c;
                    if x.is_zero() {
                        terms.remove(&m);
                    }
                }
                None => {
                    terms.insert(m, c);
                }
            }
        }
        MPoly::from_raw(vars, terms)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;

    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &MPoly {
    type Output = MPoly;

    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Mul for &MPoly {
    type Output = MPoly;

    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        if self.is_constant() {
            return rhs.scale(&self.constant_value());
        }
        if rhs.is_constant() {
            return self.scale(&rhs.constant_value());
        }
        let vars = union_vars(&self.vars, &rhs.vars);
        let a = self.aligned(&vars);
        let b = rhs.aligned(&vars);
        let mut terms: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let m = ma.mul(mb);
                let c = ca * cb;
                match terms.get_mut(&m) {
                    Some(x) => *x += c,
                    None => {
                        terms.insert(m, c);
                    }
                }
            }
        }
        MPoly::from_raw(vars, terms)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> MPoly {
        MPoly::var(Var::Q)
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let a = &q() + &MPoly::one();
        let b = &a - &q();
        assert!(b.is_constant());
        assert_eq!(b, MPoly::one());
        assert!(b.vars().is_empty());
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = &(&q() * &q()) - &MPoly::one();
        let b = &q() - &MPoly::one();
        assert_eq!(a.div_exact(&b).unwrap(), &q() + &MPoly::one());
        assert!(b.div_exact(&a).is_none());
        let x = MPoly::var(Var::X(1));
        assert!(a.div_exact(&x).is_none());
    }

    #[test]
    fn display_graded_lex_descending() {
        let p = MPoly::var(Var::P);
        let t = MPoly::var(Var::T);
        let f = &(&(&p.pow(2) * &t) - &p) + &MPoly::from_int(3);
        assert_eq!(f.to_string(), "p^2*t - p + 3");
        let mut s = String::new();
        f.fmt_ordered(&mut s, true).unwrap();
        assert_eq!(s, "3 - p + p^2*t");
    }

    #[test]
    fn coefficients_round_trip() {
        let p = MPoly::var(Var::P);
        let t = MPoly::var(Var::T);
        let f = &(&p.pow(3) * &t) + &(&p * &t.pow(2)) + MPoly::from_int(5);
        let cs = f.coeffs_in(Var::P);
        assert_eq!(cs.len(), 4);
        assert_eq!(MPoly::from_coeffs_in(Var::P, &cs), f);
    }
}
