//! Multivariate gcd over Q by recursive content / primitive-part splitting
//! and primitive pseudo-remainder sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::mpoly::MPoly;
use super::var::Var;

/// Greatest common divisor, normalized to be monic in graded-lex order.
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a.num_terms() == 1 || b.num_terms() == 1 {
        let (m, other) = if a.num_terms() == 1 { (a, b) } else { (b, a) };
        return monomial_gcd(&m.leading_powers(), &other.monomial_content());
    }
    // A variable missing from one side can only contribute through the content.
    if let Some(v) = a.vars().iter().find(|v| !b.vars().contains(v)) {
        return gcd(&content(a, *v), b);
    }
    if let Some(v) = b.vars().iter().find(|v| !a.vars().contains(v)) {
        return gcd(a, &content(b, *v));
    }
    let v = main_variable(a, b);
    let ca = content(a, v);
    let cb = content(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_prs(pa, pb, v);
    (&c * &g).monic()
}

fn monomial_gcd(a: &[(Var, u32)], b: &[(Var, u32)]) -> MPoly {
    let powers: Vec<(Var, u32)> = a
        .iter()
        .filter_map(|(v, e)| {
            b.iter()
                .find(|(w, _)| w == v)
                .map(|(_, f)| (*v, (*e).min(*f)))
        })
        .collect();
    MPoly::monomial(BigRational::one(), &powers)
}

/// Shared variable with the smallest maximal degree.
fn main_variable(a: &MPoly, b: &MPoly) -> Var {
    *a.vars()
        .iter()
        .min_by_key(|v| a.degree_in(**v).max(b.degree_in(**v)))
        .expect("both inputs are non-constant")
}

/// gcd of the coefficients of `a` viewed as a polynomial in `v`.
pub fn content(a: &MPoly, v: Var) -> MPoly {
    let mut g = MPoly::zero();
    for c in a.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return MPoly::one();
        }
    }
    g
}

fn primitive_part(a: &MPoly, v: Var) -> MPoly {
    let c = content(a, v);
    a.div_exact(&c).expect("content divides")
}

fn leading_coeff_in(a: &MPoly, v: Var) -> MPoly {
    a.coeffs_in(v).pop().unwrap_or_else(MPoly::zero)
}

/// Pseudo-remainder of `a` by `b` in the variable `v`.
pub fn pseudo_remainder(a: &MPoly, b: &MPoly, v: Var) -> MPoly {
    let db = b.degree_in(v);
    let lb = leading_coeff_in(b, v);
    let mut r = a.clone();
    while !r.is_zero() && r.vars().contains(&v) && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = leading_coeff_in(&r, v);
        let shift = MPoly::monomial(BigRational::one(), &[(v, dr - db)]);
        r = &(&r * &lb) - &(&(&lr * &shift) * b);
    }
    if db == 0 {
        // b is free of v: the pseudo-remainder is zero.
        return MPoly::zero();
    }
    r
}

fn primitive_prs(a: MPoly, b: MPoly, v: Var) -> MPoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return primitive_part(&b, v);
        }
        if r.degree_in(v) == 0 {
            return MPoly::one();
        }
        a = b;
        b = primitive_part(&r, v);
    }
}

/// Dense univariate polynomial with rational coefficients, lowest degree first.
pub(crate) type UniPoly = Vec<BigRational>;

fn uni_trim(mut p: UniPoly) -> UniPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Exact univariate division; `None` when the remainder is nonzero.
pub(crate) fn uni_div_exact(a: &[BigRational], b: &[BigRational]) -> Option<UniPoly> {
    let b = uni_trim(b.to_vec());
    let mut r = uni_trim(a.to_vec());
    if b.is_empty() {
        return None;
    }
    if r.len() < b.len() {
        return if r.is_empty() { Some(Vec::new()) } else { None };
    }
    let lb = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lb;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= bc * &c;
        }
        q[shift] = c;
        r = uni_trim(r);
    }
    if r.is_empty() {
        Some(q)
    } else {
        None
    }
}

fn uni_mul(a: &[BigRational], b: &[BigRational]) -> UniPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return 0;
            }
            result = -result;
        }
        f += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// The k-th cyclotomic polynomial, `∏_{d | k} (z^d − 1)^{μ(k/d)}`.
pub(crate) fn cyclotomic(k: u32) -> UniPoly {
    let binom = |d: u32| {
        let mut p: UniPoly = vec![BigRational::zero(); d as usize + 1];
        p[0] = -BigRational::one();
        p[d as usize] = BigRational::one();
        p
    };
    let mut num: UniPoly = vec![BigRational::one()];
    let mut den: UniPoly = vec![BigRational::one()];
    for d in 1..=k {
        if k % d == 0 {
            match mobius(k / d) {
                1 => num = uni_mul(&num, &binom(d)),
                -1 => den = uni_mul(&den, &binom(d)),
                _ => {}
            }
        }
    }
    uni_div_exact(&num, &den).expect("cyclotomic quotient is exact")
}

/// If `f = u(μ)` for a primitive monomial `μ` and `f(0) ≠ 0`, returns `μ` as
/// exponent pairs together with `u`.
pub(crate) fn as_univariate_in_monomial(f: &MPoly) -> Option<(Vec<(Var, u32)>, UniPoly)> {
    if f.constant_value().is_zero() || f.is_constant() {
        return None;
    }
    let vars = f.vars().to_vec();
    let terms: Vec<(Vec<u32>, BigRational)> = f
        .terms()
        .map(|(powers, c)| {
            let mut e = vec![0u32; vars.len()];
            for (v, k) in powers {
                e[vars.binary_search(&v).unwrap()] = k;
            }
            (e, c.clone())
        })
        .collect();
    let first = terms.iter().find(|(e, _)| e.iter().any(|&x| x > 0))?;
    let g = first.0.iter().fold(0u32, |acc, &x| acc.gcd(&x));
    let dir: Vec<u32> = first.0.iter().map(|&x| x / g).collect();
    let mut u: UniPoly = Vec::new();
    for (e, c) in &terms {
        // e must be k * dir for an integer k ≥ 0.
        let i = dir.iter().position(|&x| x > 0).unwrap();
        if e[i] % dir[i] != 0 {
            return None;
        }
        let k = e[i] / dir[i];
        if e.iter().zip(&dir).any(|(&a, &b)| a != k * b) {
            return None;
        }
        let k = k as usize;
        if u.len() <= k {
            u.resize(k + 1, BigRational::zero());
        }
        u[k] = c.clone();
    }
    let mu = vars.into_iter().zip(dir).filter(|(_, e)| *e > 0).collect();
    Some((mu, u))
}

pub(crate) fn uni_eval_at_monomial(u: &[BigRational], mu: &[(Var, u32)]) -> MPoly {
    let mut out = MPoly::zero();
    for (k, c) in u.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let powers: Vec<(Var, u32)> = mu.iter().map(|(v, e)| (*v, e * k as u32)).collect();
        out = &out + &MPoly::monomial(c.clone(), &powers);
    }
    out
}

fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// gcd(num, f) specialised to denominators that are polynomials in a single
/// primitive monomial with only cyclotomic irreducible factors, such as
/// `1 - p^5*t^5`. Each `Φ_k(μ)` is irreducible in Q[vars], so divisibility
/// tests replace the pseudo-remainder sequence. Returns `None` when `f` has a
/// non-cyclotomic factor.
pub(crate) fn cyclotomic_gcd(num: &MPoly, f: &MPoly) -> Option<MPoly> {
    let (mu, u) = as_univariate_in_monomial(f)?;
    let deg = (u.len() - 1) as u32;
    let mut rest = u.clone();
    let mut rest_num = num.clone();
    let mut g = MPoly::one();
    // φ(k) ≥ sqrt(k / 2), so every Φ_k of degree ≤ deg has k ≤ 2·deg².
    for k in 1..=2 * deg * deg {
        if euler_phi(k) > deg {
            continue;
        }
        let phi = cyclotomic(k);
        while let Some(r) = uni_div_exact(&rest, &phi) {
            rest = r;
            let factor = uni_eval_at_monomial(&phi, &mu);
            if let Some(q) = rest_num.div_exact(&factor) {
                rest_num = q;
                g = &g * &factor;
            }
        }
    }
    let rest = uni_trim(rest);
    if rest.len() == 1 {
        Some(g.monic())
    } else {
        None
    }
}

/// Content of a polynomial's coefficients as a positive rational, so that
/// `p / content` has coprime integer coefficients.
pub fn rational_content(p: &MPoly) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return BigRational::one();
    }
    BigRational::new(num.abs(), den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse::parse_poly;

    fn poly(s: &str) -> MPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn gcd_basic() {
        let a = poly("(q - 1)*(q + 2)*X1");
        let b = poly("(q - 1)*(q - 3)");
        assert_eq!(gcd(&a, &b), poly("q - 1"));
        assert_eq!(gcd(&poly("q^2 - 1"), &poly("q + 1")), poly("q + 1"));
        assert!(gcd(&poly("X1 + 1"), &poly("X1 - 1")).is_one());
    }

    #[test]
    fn gcd_multivariate() {
        let f = poly("1 + q*X1 + X2^2*p");
        let a = &f * &poly("p*t - 3*q + 1");
        let b = &f * &poly("t^2 + X1");
        assert_eq!(gcd(&a, &b), f.monic());
    }

    #[test]
    fn gcd_with_monomials() {
        assert_eq!(gcd(&poly("p^2*t"), &poly("p^3 + p*t")), poly("p"));
        assert!(gcd(&poly("p^2*t"), &poly("1 + p")).is_one());
    }

    #[test]
    fn cyclotomic_polys() {
        let to_i: Vec<i64> = cyclotomic(6)
            .iter()
            .map(|c| c.to_integer().try_into().unwrap())
            .collect();
        assert_eq!(to_i, vec![1, -1, 1]);
        assert_eq!(cyclotomic(1).len(), 2);
    }

    #[test]
    fn cyclotomic_fast_path_agrees_with_prs() {
        let f = poly("1 - p^2*t^2");
        let num = poly("(1 + p*t)*(3 + t)");
        let fast = cyclotomic_gcd(&num, &f).unwrap();
        assert_eq!(fast, gcd(&num, &f));
        assert_eq!(fast, poly("1 + p*t").monic());
        assert!(cyclotomic_gcd(&num, &poly("1 - 2*p")).is_none());
    }
}
