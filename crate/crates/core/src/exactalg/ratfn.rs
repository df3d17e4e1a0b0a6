//! Canonical quotients of sparse polynomials.
//!
//! A [`RatFn`] is stored as `num / (m · ∏ f_i)` where `m` is a monomial and
//! every `f_i` is a non-monomial polynomial scaled so that its constant term
//! is 1 (or, lacking a constant term, so that it is monic). Structural factors
//! such as `1 - p^2*t^3` survive arithmetic and are only expanded when a gcd
//! or an equality test needs the full denominator.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gcd::{cyclotomic_gcd, gcd};
use super::mpoly::MPoly;
use super::var::Var;
use crate::error::{Error, Result};

/// Above this product of term counts the full multivariate gcd is skipped and
/// only exact division by the factor is attempted.
const GCD_TERM_BUDGET: usize = 6000;

#[derive(Clone, Debug)]
pub struct RatFn {
    num: MPoly,
    mono: Vec<(Var, u32)>,
    factors: Vec<MPoly>,
}

/// Laurent monomial `c · ∏ v^e` with signed exponents.
pub type LaurentMonomial = (BigRational, Vec<(Var, i64)>);

fn merge_powers(a: &[(Var, u32)], b: &[(Var, u32)]) -> Vec<(Var, u32)> {
    let mut acc: BTreeMap<Var, u32> = BTreeMap::new();
    for (v, e) in a.iter().chain(b) {
        *acc.entry(*v).or_default() += e;
    }
    acc.into_iter().filter(|(_, e)| *e > 0).collect()
}

fn min_powers(a: &[(Var, u32)], b: &[(Var, u32)]) -> Vec<(Var, u32)> {
    a.iter()
        .filter_map(|(v, e)| {
            b.iter()
                .find(|(w, _)| w == v)
                .map(|(_, f)| (*v, (*e).min(*f)))
        })
        .filter(|(_, e)| *e > 0)
        .collect()
}

fn sub_powers(a: &[(Var, u32)], b: &[(Var, u32)]) -> Vec<(Var, u32)> {
    a.iter()
        .map(|(v, e)| {
            let f = b.iter().find(|(w, _)| w == v).map_or(0, |(_, f)| *f);
            (*v, e - f)
        })
        .filter(|(_, e)| *e > 0)
        .collect()
}

/// Scales a factor to constant term 1, or to leading coefficient 1 when the
/// constant term vanishes. Returns the scaled factor and the scale removed.
fn normalize_factor(f: &MPoly) -> (MPoly, BigRational) {
    let c = f.constant_value();
    let s = if c.is_zero() { f.leading_coefficient() } else { c };
    (f.scale(&s.recip()), s)
}

fn factor_key(f: &MPoly) -> (u32, usize, String) {
    (f.total_degree(), f.num_terms(), f.to_string())
}

/// Common factor of `num` and the denominator factor `f`.
fn common_factor(num: &MPoly, f: &MPoly) -> MPoly {
    if let Some(g) = cyclotomic_gcd(num, f) {
        return g;
    }
    if num.num_terms() * f.num_terms() <= GCD_TERM_BUDGET {
        return gcd(num, f);
    }
    if num.div_exact(f).is_some() {
        f.clone()
    } else {
        MPoly::one()
    }
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn {
            num: MPoly::zero(),
            mono: Vec::new(),
            factors: Vec::new(),
        }
    }

    pub fn one() -> Self {
        RatFn::from_poly(MPoly::one())
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFn {
            num: p,
            mono: Vec::new(),
            factors: Vec::new(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        RatFn::from_poly(MPoly::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        RatFn::from_poly(MPoly::from_int(c))
    }

    pub fn var(v: Var) -> Self {
        RatFn::from_poly(MPoly::var(v))
    }

    /// `c · ∏ v^e` with possibly negative exponents.
    pub fn laurent_monomial(c: BigRational, powers: &[(Var, i64)]) -> Self {
        let up: Vec<(Var, u32)> = powers
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|(v, e)| (*v, *e as u32))
            .collect();
        let down: Vec<(Var, u32)> = powers
            .iter()
            .filter(|(_, e)| *e < 0)
            .map(|(v, e)| (*v, (-*e) as u32))
            .collect();
        RatFn::from_factors(MPoly::monomial(c, &up), vec![MPoly::monomial(BigRational::one(), &down)])
            .expect("monomial denominator is nonzero")
    }

    /// `num / den`, reduced.
    pub fn canonicalize(num: MPoly, den: MPoly) -> Result<Self> {
        RatFn::from_factors(num, vec![den])
    }

    /// `num / ∏ factors`, reduced, keeping each factor as a structural unit.
    pub fn from_factors(num: MPoly, factors: Vec<MPoly>) -> Result<Self> {
        RatFn::build(num, Vec::new(), factors)
    }

    fn build(num: MPoly, mono: Vec<(Var, u32)>, raw: Vec<MPoly>) -> Result<Self> {
        if raw.iter().any(MPoly::is_zero) {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        let mut num = num;
        let mut mono = mono;
        let mut factors = Vec::with_capacity(raw.len());
        for f in raw {
            let m = f.monomial_content();
            let f = f.div_monomial(&m);
            mono = merge_powers(&mono, &m);
            if f.is_constant() {
                num = num.scale(&f.constant_value().recip());
                continue;
            }
            let (f, s) = normalize_factor(&f);
            num = num.scale(&s.recip());
            factors.push(f);
        }
        let common = min_powers(&num.monomial_content(), &mono);
        if !common.is_empty() {
            num = num.div_monomial(&common);
            mono = sub_powers(&mono, &common);
        }
        let mut reduced = Vec::with_capacity(factors.len());
        for f in factors {
            let g = common_factor(&num, &f);
            if g.is_constant() {
                reduced.push(f);
                continue;
            }
            num = num.div_exact(&g).expect("gcd divides numerator");
            let rest = f.div_exact(&g).expect("gcd divides factor");
            if rest.is_constant() {
                num = num.scale(&rest.constant_value().recip());
            } else {
                let (rest, s) = normalize_factor(&rest);
                num = num.scale(&s.recip());
                reduced.push(rest);
            }
        }
        reduced.sort_by_cached_key(factor_key);
        Ok(RatFn {
            num,
            mono,
            factors: reduced,
        })
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    /// Monomial part of the denominator.
    pub fn denominator_monomial(&self) -> &[(Var, u32)] {
        &self.mono
    }

    /// Non-monomial denominator factors in canonical order.
    pub fn denominator_factors(&self) -> &[MPoly] {
        &self.factors
    }

    pub fn expanded_denominator(&self) -> MPoly {
        let mut d = MPoly::monomial(BigRational::one(), &self.mono);
        for f in &self.factors {
            d = &d * f;
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.mono.is_empty() && self.factors.is_empty()
    }

    /// The polynomial itself when the denominator is trivial.
    pub fn as_poly(&self) -> Option<&MPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    /// Variables occurring in numerator or denominator, sorted.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.num.vars().to_vec();
        vs.extend(self.mono.iter().map(|(v, _)| *v));
        for f in &self.factors {
            vs.extend_from_slice(f.vars());
        }
        vs.sort();
        vs.dedup();
        vs
    }

    /// `Some((c, μ))` when the function is the Laurent monomial `c·μ`.
    pub fn as_laurent_monomial(&self) -> Option<LaurentMonomial> {
        if self.num.num_terms() != 1 || !self.factors.is_empty() {
            return None;
        }
        let (powers, c) = self.num.terms().next()?;
        let mut acc: BTreeMap<Var, i64> = BTreeMap::new();
        for (v, e) in powers {
            *acc.entry(v).or_default() += e as i64;
        }
        for (v, e) in &self.mono {
            *acc.entry(*v).or_default() -= *e as i64;
        }
        Some((c.clone(), acc.into_iter().filter(|(_, e)| *e != 0).collect()))
    }

    pub fn scale(&self, c: &BigRational) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn {
            num: self.num.scale(c),
            mono: self.mono.clone(),
            factors: self.factors.clone(),
        }
    }

    pub fn recip(&self) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFn::from_factors(self.expanded_denominator(), vec![self.num.clone()])
    }

    pub fn pow(&self, e: i32) -> Result<RatFn> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        let mut factors = Vec::with_capacity(base.factors.len() * k as usize);
        for _ in 0..k {
            factors.extend(base.factors.iter().cloned());
        }
        let mono: Vec<(Var, u32)> = base.mono.iter().map(|(v, x)| (*v, x * k)).collect();
        // The base is already reduced, so its power needs no further gcd work.
        let mut out = RatFn {
            num: base.num.pow(k),
            mono,
            factors,
        };
        out.factors.sort_by_cached_key(factor_key);
        Ok(out)
    }

    /// Multiplies by the Laurent monomial `c · ∏ v^e`.
    pub fn mul_laurent(&self, c: &BigRational, powers: &[(Var, i64)]) -> RatFn {
        self * &RatFn::laurent_monomial(c.clone(), powers)
    }

    /// Replaces each variable in `assignment` by its image. Unassigned variables
    /// pass through unchanged.
    pub fn substitute(&self, assignment: &BTreeMap<Var, RatFn>) -> Result<RatFn> {
        let relevant: BTreeMap<Var, RatFn> = assignment
            .iter()
            .filter(|(v, _)| self.vars().contains(v))
            .map(|(v, f)| (*v, f.clone()))
            .collect();
        if relevant.is_empty() {
            return Ok(self.clone());
        }
        let mut out = substitute_poly(&self.num, &relevant)?;
        let mono = substitute_poly(&MPoly::monomial(BigRational::one(), &self.mono), &relevant)?;
        out = (&out / &mono)?;
        // Dividing factor by factor keeps the images as separate denominator factors.
        for f in &self.factors {
            out = (&out / &substitute_poly(f, &relevant)?)?;
        }
        Ok(out)
    }

    /// Replaces each listed variable `v` by `1/v`.
    pub fn invert_variables(&self, vars: &[Var]) -> RatFn {
        let assignment: BTreeMap<Var, RatFn> = vars
            .iter()
            .map(|v| (*v, RatFn::laurent_monomial(BigRational::one(), &[(*v, -1)])))
            .collect();
        self.substitute(&assignment)
            .expect("inverting variables cannot create a zero denominator")
    }

    /// Returns `(c, μ)` with `self = c·μ·other` when the quotient is a Laurent
    /// monomial. Decided by comparing leading terms and then cross-multiplying.
    pub fn monomial_ratio(&self, other: &RatFn) -> Option<LaurentMonomial> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        let (lhs, rhs) = cross_products(self, other);
        let c = lhs.leading_coefficient() / rhs.leading_coefficient();
        let mut acc: BTreeMap<Var, i64> = BTreeMap::new();
        for (v, e) in lhs.leading_powers() {
            *acc.entry(v).or_default() += e as i64;
        }
        for (v, e) in rhs.leading_powers() {
            *acc.entry(v).or_default() -= e as i64;
        }
        let powers: Vec<(Var, i64)> = acc.into_iter().filter(|(_, e)| *e != 0).collect();
        let up: Vec<(Var, u32)> = powers
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|(v, e)| (*v, *e as u32))
            .collect();
        let down: Vec<(Var, u32)> = powers
            .iter()
            .filter(|(_, e)| *e < 0)
            .map(|(v, e)| (*v, (-*e) as u32))
            .collect();
        if lhs.mul_monomial(&down) == rhs.mul_monomial(&up).scale(&c) {
            Some((c, powers))
        } else {
            None
        }
    }

    /// Writes the canonical text form.
    fn write_canonical(&self, out: &mut String) -> fmt::Result {
        use std::fmt::Write;
        let num_text = self.num.to_string();
        if self.is_polynomial() {
            out.push_str(&num_text);
            return Ok(());
        }
        if self.num.num_terms() > 1 {
            write!(out, "({num_text})")?;
        } else {
            out.push_str(&num_text);
        }
        out.push('/');
        let mut items: Vec<String> = Vec::new();
        if !self.mono.is_empty() {
            items.push(MPoly::monomial(BigRational::one(), &self.mono).to_string());
        }
        for f in &self.factors {
            let mut s = String::new();
            f.fmt_ordered(&mut s, !f.constant_value().is_zero())?;
            items.push(format!("({s})"));
        }
        if items.len() == 1 {
            out.push_str(&items[0]);
        } else {
            write!(out, "({})", items.join("*"))?;
        }
        Ok(())
    }
}

/// Substitutes into a polynomial. Monomial images are handled by exponent
/// arithmetic; anything else falls back to rational-function products.
fn substitute_poly(p: &MPoly, assignment: &BTreeMap<Var, RatFn>) -> Result<RatFn> {
    let monomial_images: Option<BTreeMap<Var, LaurentMonomial>> = p
        .vars()
        .iter()
        .filter(|v| assignment.contains_key(v))
        .map(|v| assignment[v].as_laurent_monomial().map(|m| (*v, m)))
        .collect();
    if let Some(images) = monomial_images {
        let mut terms: Vec<(BTreeMap<Var, i64>, BigRational)> = Vec::with_capacity(p.num_terms());
        for (powers, c) in p.terms() {
            let mut coef = c.clone();
            let mut exps: BTreeMap<Var, i64> = BTreeMap::new();
            for (v, e) in powers {
                match images.get(&v) {
                    Some((ic, ip)) => {
                        coef *= num_traits::pow(ic.clone(), e as usize);
                        for (w, k) in ip {
                            *exps.entry(*w).or_default() += k * e as i64;
                        }
                    }
                    None => *exps.entry(v).or_default() += e as i64,
                }
            }
            terms.push((exps, coef));
        }
        let mut shift: BTreeMap<Var, i64> = BTreeMap::new();
        for (exps, _) in &terms {
            for (v, e) in exps {
                let s = shift.entry(*v).or_insert(0);
                *s = (*s).min(*e);
            }
        }
        let poly = MPoly::from_terms(terms.into_iter().map(|(exps, c)| {
            let powers: Vec<(Var, u32)> = shift
                .iter()
                .map(|(v, s)| (*v, (exps.get(v).copied().unwrap_or(0) - s) as u32))
                .collect();
            (powers, c)
        }));
        let down: Vec<(Var, u32)> = shift
            .into_iter()
            .filter(|(_, s)| *s < 0)
            .map(|(v, s)| (v, (-s) as u32))
            .collect();
        return RatFn::build(poly, down, Vec::new());
    }
    let mut out = RatFn::zero();
    let mut cache: BTreeMap<(Var, u32), RatFn> = BTreeMap::new();
    for (powers, c) in p.terms() {
        let mut term = RatFn::constant(c.clone());
        for (v, e) in powers {
            let factor = match assignment.get(&v) {
                Some(img) => match cache.get(&(v, e)) {
                    Some(f) => f.clone(),
                    None => {
                        let f = img.pow(e as i32)?;
                        cache.insert((v, e), f.clone());
                        f
                    }
                },
                None => RatFn::from_poly(MPoly::monomial(BigRational::one(), &[(v, e)])),
            };
            term = &term * &factor;
        }
        out = &out + &term;
    }
    Ok(out)
}

impl PartialEq for RatFn {
    fn eq(&self, other: &RatFn) -> bool {
        if self.mono == other.mono && self.factors == other.factors {
            return self.num == other.num;
        }
        let (lhs, rhs) = cross_products(self, other);
        lhs == rhs
    }
}

/// `(a.num · den_b, b.num · den_a)` after cancelling the denominator parts
/// the two sides share.
fn cross_products(a: &RatFn, b: &RatFn) -> (MPoly, MPoly) {
    let common = min_powers(&a.mono, &b.mono);
    let mut lhs = a.num.mul_monomial(&sub_powers(&b.mono, &common));
    for f in factor_difference(&b.factors, &a.factors) {
        lhs = &lhs * &f;
    }
    let mut rhs = b.num.mul_monomial(&sub_powers(&a.mono, &common));
    for f in factor_difference(&a.factors, &b.factors) {
        rhs = &rhs * &f;
    }
    (lhs, rhs)
}

impl Eq for RatFn {}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_canonical(&mut s)?;
        f.write_str(&s)
    }
}

impl From<MPoly> for RatFn {
    fn from(p: MPoly) -> Self {
        RatFn::from_poly(p)
    }
}

/// Multiset difference `a \ b` on factor lists (both sorted by canonical key).
fn factor_difference(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let mut rest: Vec<MPoly> = Vec::new();
    let mut used = vec![false; b.len()];
    for f in a {
        match b
            .iter()
            .enumerate()
            .position(|(i, g)| !used[i] && g == f)
        {
            Some(i) => used[i] = true,
            None => rest.push(f.clone()),
        }
    }
    rest
}

impl Add for &RatFn {
    type Output = RatFn;

    fn add(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // Structural lcm of the two factor multisets.
        let only_lhs = factor_difference(&self.factors, &rhs.factors);
        let only_rhs = factor_difference(&rhs.factors, &self.factors);
        let mono = {
            let mut acc: BTreeMap<Var, u32> = BTreeMap::new();
            for (v, e) in self.mono.iter().chain(&rhs.mono) {
                let x = acc.entry(*v).or_default();
                *x = (*x).max(*e);
            }
            acc.into_iter().collect::<Vec<_>>()
        };
        let mut a = self.num.mul_monomial(&sub_powers(&mono, &self.mono));
        for f in &only_rhs {
            a = &a * f;
        }
        let mut b = rhs.num.mul_monomial(&sub_powers(&mono, &rhs.mono));
        for f in &only_lhs {
            b = &b * f;
        }
        let mut factors = self.factors.clone();
        factors.extend(only_rhs);
        RatFn::build(&a + &b, mono, factors).expect("denominators are nonzero")
    }
}

impl Neg for &RatFn {
    type Output = RatFn;

    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            mono: self.mono.clone(),
            factors: self.factors.clone(),
        }
    }
}

impl Sub for &RatFn {
    type Output = RatFn;

    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;

    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        if rhs.is_polynomial() && rhs.num.is_constant() {
            return self.scale(&rhs.num.constant_value());
        }
        if self.is_polynomial() && self.num.is_constant() {
            return rhs.scale(&self.num.constant_value());
        }
        // Each side is reduced, so only cross pairs can cancel.
        let mut num_a = self.num.clone();
        let mut num_b = rhs.num.clone();
        let mut mono_a = self.mono.clone();
        let mut mono_b = rhs.mono.clone();
        let c = min_powers(&num_a.monomial_content(), &mono_b);
        num_a = num_a.div_monomial(&c);
        mono_b = sub_powers(&mono_b, &c);
        let c = min_powers(&num_b.monomial_content(), &mono_a);
        num_b = num_b.div_monomial(&c);
        mono_a = sub_powers(&mono_a, &c);
        let mut factors = Vec::with_capacity(self.factors.len() + rhs.factors.len());
        for (num, fs) in [(&mut num_a, &rhs.factors), (&mut num_b, &self.factors)] {
            for f in fs {
                let g = common_factor(num, f);
                if g.is_constant() {
                    factors.push(f.clone());
                    continue;
                }
                *num = num.div_exact(&g).expect("gcd divides numerator");
                let rest = f.div_exact(&g).expect("gcd divides factor");
                if rest.is_constant() {
                    *num = num.scale(&rest.constant_value().recip());
                } else {
                    let (rest, s) = normalize_factor(&rest);
                    *num = num.scale(&s.recip());
                    factors.push(rest);
                }
            }
        }
        factors.sort_by_cached_key(factor_key);
        RatFn {
            num: &num_a * &num_b,
            mono: merge_powers(&mono_a, &mono_b),
            factors,
        }
    }
}

impl Div for &RatFn {
    type Output = Result<RatFn>;

    fn div(self, rhs: &RatFn) -> Result<RatFn> {
        Ok(self * &rhs.recip()?)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: RatFn) -> RatFn {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

/// Taylor coefficients `[a_0, …, a_order]` in `t` of `f` after setting
/// `p = p_value`. Any other remaining variable is an error.
pub fn series_coefficients(f: &RatFn, p_value: i64, order: usize) -> Result<Vec<BigRational>> {
    let mut assignment = BTreeMap::new();
    assignment.insert(Var::P, RatFn::from_int(p_value));
    let g = f.substitute(&assignment)?;
    series_in_t(&g, order)
}

/// Taylor coefficients in `t` of a function of `t` alone.
pub fn series_in_t(f: &RatFn, order: usize) -> Result<Vec<BigRational>> {
    if let Some(v) = f.vars().into_iter().find(|v| *v != Var::T) {
        return Err(Error::UnexpectedVariable(v.to_string()));
    }
    if !f.denominator_monomial().is_empty() {
        return Err(Error::NotExpandable);
    }
    let dense = |p: &MPoly| -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); order + 1];
        for (k, c) in p.coeffs_in(Var::T).into_iter().enumerate() {
            if k > order {
                break;
            }
            out[k] = c.constant_value();
        }
        out
    };
    let truncated_mul = |a: &[BigRational], b: &[BigRational]| -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); order + 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(order + 1 - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let mut den = vec![BigRational::zero(); order + 1];
    den[0] = BigRational::one();
    for factor in f.denominator_factors() {
        den = truncated_mul(&den, &dense(factor));
    }
    if den[0].is_zero() {
        return Err(Error::NotExpandable);
    }
    let num = dense(f.numerator());
    let inv0 = den[0].recip();
    let mut out: Vec<BigRational> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = num[k].clone();
        for j in 1..=k {
            if !den[j].is_zero() {
                acc -= &den[j] * &out[k - j];
            }
        }
        out.push(acc * &inv0);
    }
    Ok(out)
}

/// Converts exact series coefficients to integers when all are integral.
pub fn integer_coefficients(coeffs: &[BigRational]) -> Option<Vec<BigInt>> {
    coeffs
        .iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}

/// `true` when every coefficient is a non-negative integer.
pub fn is_nonnegative_integral(coeffs: &[BigRational]) -> bool {
    coeffs.iter().all(|c| c.is_integer() && !c.is_negative())
}
