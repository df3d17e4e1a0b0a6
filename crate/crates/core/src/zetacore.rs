//! Local normal zeta functions assembled from closed formulas, together with
//! symbolic checks of their functional equations.
//!
//! Throughout, `t` stands for `p^{-s}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{parse_poly, series_coefficients, MPoly, RatFn, Var};
use crate::flagcomb::flag_fn;
use crate::grouppres::{pfaffian, Presentation};

/// The number `n_P(p)` of `F_p`-points on the Pfaffian hypersurface.
#[derive(Clone, Debug, PartialEq)]
pub enum PointCount {
    Zero,
    /// Kept as the free variable `n`.
    Symbolic,
    /// A polynomial in `p`.
    Poly(MPoly),
}

impl PointCount {
    /// `"0"` and `"n"` are recognised; anything else must be a polynomial in `p`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "n" {
            return Ok(PointCount::Symbolic);
        }
        PointCount::polynomial(parse_poly(text)?)
    }

    pub fn polynomial(f: MPoly) -> Result<Self> {
        if let Some(v) = f.vars().iter().find(|v| **v != Var::P) {
            return Err(Error::UnexpectedVariable(v.to_string()));
        }
        Ok(if f.is_zero() {
            PointCount::Zero
        } else {
            PointCount::Poly(f)
        })
    }

    pub fn constant(n: i64) -> Self {
        if n == 0 {
            PointCount::Zero
        } else {
            PointCount::Poly(MPoly::from_int(n))
        }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            PointCount::Zero => "zero",
            PointCount::Symbolic => "symbolic",
            PointCount::Poly(_) => "polynomial",
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PointCount::Zero)
    }

    fn as_ratfn(&self) -> RatFn {
        match self {
            PointCount::Zero => RatFn::zero(),
            PointCount::Symbolic => RatFn::var(Var::N),
            PointCount::Poly(f) => RatFn::from_poly(f.clone()),
        }
    }
}

impl fmt::Display for PointCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointCount::Zero => write!(f, "0"),
            PointCount::Symbolic => write!(f, "n"),
            PointCount::Poly(g) => write!(f, "{g}"),
        }
    }
}

fn pt(p_exp: i64, t_exp: i64) -> RatFn {
    RatFn::laurent_monomial(BigRational::one(), &[(Var::P, p_exp), (Var::T, t_exp)])
}

fn binom2(n: u32) -> i64 {
    (n as i64) * (n as i64 - 1) / 2
}

/// Monomials `X_i = p^{a_i} t^{b_i}` (and `Y` where defined) fed into the
/// flag functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionSet {
    x: Vec<(i64, i64)>,
    y: Option<(i64, i64)>,
}

impl SubstitutionSet {
    /// `X_i = p^{(d+i)(d'−i)} t^{d+d'−i}` for `1 ≤ i ≤ d'−1` and
    /// `Y = p^{d+d'−2} t^{d−1}`.
    pub fn smooth(d: u32, dprime: u32) -> Result<Self> {
        if d == 0 || dprime == 0 {
            return Err(Error::invalid("d and d' must be positive"));
        }
        let (d, e) = (d as i64, dprime as i64);
        let x = (1..e).map(|i| ((d + i) * (e - i), d + e - i)).collect();
        Ok(SubstitutionSet {
            x,
            y: Some((d + e - 2, d - 1)),
        })
    }

    /// `X_i = p^{(n+i)(n−i−1)} t^{2(n−i)−1}` for `1 ≤ i ≤ n−2`.
    pub fn grenham(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("Grenham groups need n ≥ 2"));
        }
        let n = n as i64;
        let x = (1..n - 1).map(|i| ((n + i) * (n - i - 1), 2 * (n - i) - 1)).collect();
        Ok(SubstitutionSet { x, y: None })
    }

    /// Number of `X` variables.
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// `X_i` for `1 ≤ i ≤ len()`.
    pub fn x(&self, i: usize) -> RatFn {
        let (a, b) = self.x[i - 1];
        pt(a, b)
    }

    pub fn x_exponents(&self) -> &[(i64, i64)] {
        &self.x
    }

    pub fn y(&self) -> Option<RatFn> {
        self.y.map(|(a, b)| pt(a, b))
    }

    /// Specializes `F_n(q, X)` at `q = p^{-1}` and `X_i` from this set.
    pub fn specialize_flag_fn(&self, n: u32) -> Result<RatFn> {
        if n as usize > self.x.len() + 1 {
            return Err(Error::invalid(format!(
                "F_{n} needs {} substitutions, only {} available",
                n - 1,
                self.x.len()
            )));
        }
        let mut assignment = BTreeMap::new();
        assignment.insert(Var::Q, pt(-1, 0));
        for i in 1..n {
            assignment.insert(Var::X(i), self.x(i as usize));
        }
        flag_fn(n)?.substitute(&assignment)
    }
}

/// `ζ_{Z_p^d}(s) = ∏_{i<d} 1/(1 − p^i t)`.
pub fn zeta_lattice(d: u32) -> Result<RatFn> {
    if d == 0 {
        return Err(Error::invalid("d must be positive"));
    }
    let factors = (0..d)
        .map(|i| &MPoly::one() - &MPoly::monomial(BigRational::one(), &[(Var::P, i), (Var::T, 1)]))
        .collect();
    RatFn::from_factors(MPoly::one(), factors)
}

/// `ζ_p(as − b) = 1/(1 − p^b t^a)`.
pub fn zeta_p_shift(a: u32, b: u32) -> Result<RatFn> {
    if a == 0 {
        return Err(Error::invalid("a must be positive"));
    }
    let m = MPoly::monomial(BigRational::one(), &[(Var::P, b), (Var::T, a)]);
    RatFn::from_factors(MPoly::one(), vec![&MPoly::one() - &m])
}

/// Number of lifts of `(0:1:…:1)` to `P^{d'−1}(Z/p^a)` whose first
/// coordinate has valuation `b`.
pub fn lambda_count(a: u32, b: u32, dprime: u32) -> Result<MPoly> {
    if b == 0 || a < b {
        return Err(Error::invalid(format!("need a ≥ b ≥ 1, got a = {a}, b = {b}")));
    }
    if dprime < 2 {
        return Err(Error::invalid("λ needs d' ≥ 2"));
    }
    let base = (dprime - 2) * (a - 1);
    let p = |e: u32| MPoly::monomial(BigRational::one(), &[(Var::P, e)]);
    Ok(if a == b {
        p(base)
    } else {
        &p(base + a - b) - &p(base + a - b - 1)
    })
}

fn require_smooth_shape(d: u32, dprime: u32) -> Result<()> {
    if d < 2 || d % 2 == 1 {
        return Err(Error::invalid(format!("closed forms need even d ≥ 2, got d = {d}")));
    }
    if dprime == 0 {
        return Err(Error::invalid("d' must be positive"));
    }
    Ok(())
}

/// `B_0 = p^{−(d'−1)} Y (p − X_{d'−1}) / ((1 − Y)(1 − X_{d'−1}))`.
pub fn b0_closed_form(d: u32, dprime: u32) -> Result<RatFn> {
    require_smooth_shape(d, dprime)?;
    if dprime < 2 {
        return Err(Error::invalid("B_0 needs d' ≥ 2"));
    }
    let (x, y) = last_x_and_y(d, dprime)?;
    let num = &y * &(&MPoly::var(Var::P) - &x);
    let b0 = RatFn::from_factors(num, vec![&MPoly::one() - &y, &MPoly::one() - &x])?;
    Ok(b0.mul_laurent(&BigRational::one(), &[(Var::P, -(dprime as i64 - 1))]))
}

/// `X_{d'−1}` and `Y` as polynomials.
fn last_x_and_y(d: u32, dprime: u32) -> Result<(MPoly, MPoly)> {
    let subs = SubstitutionSet::smooth(d, dprime)?;
    let (xa, xb) = subs.x[dprime as usize - 2];
    let (ya, yb) = subs.y.expect("smooth substitutions define Y");
    let mono = |a: i64, b: i64| MPoly::monomial(BigRational::one(), &[(Var::P, a as u32), (Var::T, b as u32)]);
    Ok((mono(xa, xb), mono(ya, yb)))
}

/// Coefficients `[c_0, …, c_order]` of `Σ_{a≥b≥1} λ(a,b) p^{da} t^{(d+1)a−2b}`
/// at `p = prime`.
pub fn b0_double_sum(d: u32, dprime: u32, prime: i64, order: usize) -> Result<Vec<BigInt>> {
    require_smooth_shape(d, dprime)?;
    let mut out = vec![BigInt::zero(); order + 1];
    let pv = BigRational::from_integer(prime.into());
    // The smallest exponent for a given a is (d−1)a.
    for a in 1..=(order as u32 / (d - 1)) {
        let weight = BigInt::from(prime).pow(d * a);
        for b in 1..=a {
            let e = ((d + 1) * a - 2 * b) as usize;
            if e > order {
                continue;
            }
            let lambda = lambda_count(a, b, dprime)?.eval_var(Var::P, &pv).constant_value();
            out[e] += lambda.to_integer() * &weight;
        }
    }
    Ok(out)
}

/// The two parts `(A_0, A_1)` of `A = A_0 + n_P·A_1`.
pub fn smooth_components(d: u32, dprime: u32) -> Result<(RatFn, RatFn)> {
    require_smooth_shape(d, dprime)?;
    let subs = SubstitutionSet::smooth(d, dprime)?;
    let a0 = subs.specialize_flag_fn(dprime)?;
    if dprime == 1 {
        return Ok((a0, RatFn::zero()));
    }
    let (x, y) = last_x_and_y(d, dprime)?;
    let num = &(&MPoly::var(Var::P) * &y) - &x;
    let correction = RatFn::from_factors(num, vec![&MPoly::one() - &x, &MPoly::one() - &y])?;
    let a1 = (&subs.specialize_flag_fn(dprime - 1)? * &correction)
        .mul_laurent(&BigRational::one(), &[(Var::P, -(dprime as i64 - 1))]);
    Ok((a0, a1))
}

/// `A(p, t) = F_{d'}(p^{-1}, X) + n_P · F_{d'−1}(p^{-1}, X') p^{−(d'−1)} (pY − X_{d'−1}) / ((1 − X_{d'−1})(1 − Y))`.
pub fn smooth_a(d: u32, dprime: u32, n_p: &PointCount) -> Result<RatFn> {
    if dprime == 1 && !n_p.is_zero() {
        return Err(Error::invalid("for d' = 1 the Pfaffian has no points, n_P must be 0"));
    }
    let (a0, a1) = smooth_components(d, dprime)?;
    Ok(&a0 + &(&n_p.as_ratfn() * &a1))
}

/// A local normal zeta function with its provenance data.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalZeta {
    pub value: RatFn,
    pub d: u32,
    pub dprime: u32,
    pub n_p: PointCount,
    /// `(W_0, W_1)` with `value = W_0 + n_P·W_1`.
    pub components: Option<(RatFn, RatFn)>,
}

impl LocalZeta {
    /// `ζ_{Z_p^d}(s) ζ_p((d+d')s − dd')`.
    pub fn prefactor(&self) -> Result<RatFn> {
        prefactor(self.d, self.dprime)
    }

    /// Series coefficients at `p = prime`. Fails while `n_P` is symbolic.
    pub fn series(&self, prime: i64, order: usize) -> Result<Vec<BigInt>> {
        let coeffs = series_coefficients(&self.value, prime, order)?;
        coeffs
            .into_iter()
            .map(|c| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::invalid(format!("non-integral series coefficient {c}")))
                }
            })
            .collect()
    }

    /// Replaces a symbolic `n_P` by a concrete polynomial.
    pub fn with_point_count(&self, n_p: PointCount) -> Result<LocalZeta> {
        let (w0, w1) = self
            .components
            .clone()
            .ok_or_else(|| Error::invalid("no components to recombine"))?;
        if self.dprime == 1 && !n_p.is_zero() {
            return Err(Error::invalid("for d' = 1 the Pfaffian has no points, n_P must be 0"));
        }
        Ok(LocalZeta {
            value: &w0 + &(&n_p.as_ratfn() * &w1),
            n_p,
            components: Some((w0, w1)),
            ..self.clone()
        })
    }

    pub fn metadata(&self, report: Option<&FunEqReport>) -> serde_json::Value {
        serde_json::json!({
            "d": self.d,
            "dprime": self.dprime,
            "n_P": { "mode": self.n_p.mode(), "value": self.n_p.to_string() },
            "funeq": report,
        })
    }
}

impl fmt::Display for LocalZeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn prefactor(d: u32, dprime: u32) -> Result<RatFn> {
    Ok(&zeta_lattice(d)? * &zeta_p_shift(d + dprime, d * dprime)?)
}

/// `ζ^◁_{G,p} = ζ_{Z_p^d}(s) ζ_p((d+d')s − dd') A(p, p^{-s})` for a presentation
/// whose Pfaffian is smooth and line-free at the primes in question.
pub fn normal_zeta_smooth(pres: &Presentation, n_p: PointCount) -> Result<LocalZeta> {
    let d = pres.d() as u32;
    let dprime = pres.dprime() as u32;
    require_smooth_shape(d, dprime)?;
    if pfaffian(pres).is_zero() {
        return Err(Error::NoClosedForm("the Pfaffian vanishes identically".into()));
    }
    if dprime == 1 && !n_p.is_zero() {
        return Err(Error::invalid("for d' = 1 the Pfaffian has no points, n_P must be 0"));
    }
    let (a0, a1) = smooth_components(d, dprime)?;
    let pre = prefactor(d, dprime)?;
    let w0 = &pre * &a0;
    let w1 = &pre * &a1;
    Ok(LocalZeta {
        value: &w0 + &(&n_p.as_ratfn() * &w1),
        d,
        dprime,
        n_p,
        components: Some((w0, w1)),
    })
}

/// The Grenham group `G_n`: `ζ_{Z_p^n}(s) ζ_p((2n−1)s − n(n−1)) F_{n−1}(p^{-1}, X)`.
pub fn grenham_zeta(n: u32) -> Result<LocalZeta> {
    let subs = SubstitutionSet::grenham(n)?;
    let a = subs.specialize_flag_fn(n - 1)?;
    let value = &prefactor(n, n - 1)? * &a;
    Ok(LocalZeta {
        value,
        d: n,
        dprime: n - 1,
        n_p: PointCount::Zero,
        components: None,
    })
}

/// `ζ^◁_{G×Z^r} = ζ^◁_G · ∏_{k<r} ζ_p(s − (h+k))` where `h` is the Hirsch length of `G`.
pub fn direct_product_shift(value: &RatFn, hirsch: u32, r: u32) -> Result<RatFn> {
    let mut out = value.clone();
    for k in 0..r {
        out = &out * &zeta_p_shift(1, hirsch + k)?;
    }
    Ok(out)
}

/// A symmetry `f(1/p, 1/t) = sign · p^a t^b · f(p, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Symmetry {
    pub sign: i32,
    pub p_exponent: i64,
    pub t_exponent: i64,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { "-" } else { "+" };
        write!(f, "{s}p^{} t^{}", self.p_exponent, self.t_exponent)
    }
}

/// Reads `inverted / original` as a symmetry, if it is one.
pub fn observed_symmetry(inverted: &RatFn, original: &RatFn) -> Option<Symmetry> {
    let (c, powers) = inverted.monomial_ratio(original)?;
    let sign = if c == BigRational::one() {
        1
    } else if c == -BigRational::one() {
        -1
    } else {
        return None;
    };
    let mut out = Symmetry {
        sign,
        p_exponent: 0,
        t_exponent: 0,
    };
    for (v, e) in powers {
        match v {
            Var::P => out.p_exponent = e,
            Var::T => out.t_exponent = e,
            _ => return None,
        }
    }
    Some(out)
}

fn invert_pt(f: &RatFn) -> RatFn {
    f.invert_variables(&[Var::P, Var::T])
}

fn check_symmetry(f: &RatFn, expected: Symmetry) -> bool {
    if f.is_zero() {
        return true;
    }
    observed_symmetry(&invert_pt(f), f) == Some(expected)
}

/// Symmetries of the parts `W_0, W_1` and `A_0, A_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSymmetry {
    pub w0: bool,
    pub w1: bool,
    pub a0: bool,
    pub a1: bool,
    pub w1_expected: Symmetry,
}

impl ComponentSymmetry {
    pub fn holds(&self) -> bool {
        self.w0 && self.w1 && self.a0 && self.a1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunEqReport {
    pub holds: bool,
    /// Only the components were checked because `n_P` is symbolic.
    pub conditional: bool,
    pub expected: Symmetry,
    pub observed: Option<Symmetry>,
    pub components: Option<ComponentSymmetry>,
}

/// Expected symmetry `(−1)^{d+d'} p^{binom(d+d',2)} t^{2d+d'}` of the full zeta function.
pub fn expected_symmetry(d: u32, dprime: u32) -> Symmetry {
    Symmetry {
        sign: if (d + dprime) % 2 == 0 { 1 } else { -1 },
        p_exponent: binom2(d + dprime),
        t_exponent: 2 * d as i64 + dprime as i64,
    }
}

/// Checks the functional equation under `p ↦ 1/p, t ↦ 1/t`. A polynomial
/// `n_P` is inverted by the rule `n_P(1/p) = p^{−(d'−2)} n_P(p)`.
pub fn verify_funeq(z: &LocalZeta) -> Result<FunEqReport> {
    let expected = expected_symmetry(z.d, z.dprime);
    let weil_shift = z.dprime as i64 - 2;
    let components = match &z.components {
        Some((w0, w1)) => {
            let pre = z.prefactor()?;
            let a0 = w0 / &pre;
            let a1 = w1 / &pre;
            let a_expected = Symmetry {
                sign: if z.dprime % 2 == 1 { 1 } else { -1 },
                p_exponent: binom2(z.dprime),
                t_exponent: 0,
            };
            let shifted = |s: Symmetry| Symmetry {
                p_exponent: s.p_exponent + weil_shift,
                ..s
            };
            Some(ComponentSymmetry {
                w0: check_symmetry(w0, expected),
                w1: check_symmetry(w1, shifted(expected)),
                a0: check_symmetry(&a0?, a_expected),
                a1: check_symmetry(&a1?, shifted(a_expected)),
                w1_expected: shifted(expected),
            })
        }
        None => None,
    };
    let components_ok = components.as_ref().map_or(true, ComponentSymmetry::holds);
    let (observed, conditional) = match (&z.n_p, &z.components) {
        (PointCount::Symbolic, Some((w0, _))) => (observed_symmetry(&invert_pt(w0), w0), true),
        (PointCount::Symbolic, None) => {
            return Err(Error::invalid("symbolic n_P without components"));
        }
        (PointCount::Poly(f), Some((w0, w1))) => {
            let n_inv = RatFn::from_poly(f.clone()).mul_laurent(&BigRational::one(), &[(Var::P, -weil_shift)]);
            let inverted = &invert_pt(w0) + &(&n_inv * &invert_pt(w1));
            (observed_symmetry(&inverted, &z.value), false)
        }
        _ => (observed_symmetry(&invert_pt(&z.value), &z.value), false),
    };
    Ok(FunEqReport {
        holds: observed == Some(expected) && components_ok,
        conditional,
        expected,
        observed,
        components,
    })
}

pub fn nonnegative_integers(coeffs: &[BigInt]) -> bool {
    coeffs.iter().all(|c| !c.is_negative())
}
