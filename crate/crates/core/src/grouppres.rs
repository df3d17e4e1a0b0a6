//! Class-2 presentations `[x_i, x_j] = M(y)_{ij}` given by an antisymmetric
//! matrix of integer linear forms in `y_1, …, y_{d'}`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{MPoly, Var};
use crate::fpgeom::{self, Check};

/// Integer coefficients of `y_1, …, y_{d'}`.
pub type LinearForm = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    d: usize,
    dprime: usize,
    matrix: Vec<Vec<LinearForm>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    d: usize,
    dprime: usize,
    entries: Vec<Entry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    i: usize,
    j: usize,
    form: LinearForm,
}

impl Presentation {
    /// Builds a presentation from 1-based entries `(i, j, form)`. Omitted pairs
    /// are zero and `(j, i)` is filled in by antisymmetry.
    pub fn from_entries(d: usize, dprime: usize, entries: &[(usize, usize, LinearForm)]) -> Result<Self> {
        if d < 2 {
            return Err(Error::Presentation(format!("d = {d} must be at least 2")));
        }
        if dprime < 1 {
            return Err(Error::Presentation("dprime must be at least 1".into()));
        }
        let mut given: Vec<Vec<Option<LinearForm>>> = vec![vec![None; d]; d];
        for (i, j, form) in entries {
            let (i, j) = (*i, *j);
            if i == 0 || j == 0 || i > d || j > d {
                return Err(Error::Presentation(format!("index ({i}, {j}) outside 1..={d}")));
            }
            if form.len() != dprime {
                return Err(Error::Presentation(format!(
                    "form at ({i}, {j}) has length {}, expected {dprime}",
                    form.len()
                )));
            }
            if i == j {
                if form.iter().any(|&c| c != 0) {
                    return Err(Error::Presentation(format!("nonzero diagonal entry at ({i}, {i})")));
                }
                continue;
            }
            if given[i - 1][j - 1].is_some() {
                return Err(Error::Presentation(format!("entry ({i}, {j}) given twice")));
            }
            given[i - 1][j - 1] = Some(form.clone());
        }
        let zero = vec![0i64; dprime];
        let mut matrix = vec![vec![zero.clone(); d]; d];
        for i in 0..d {
            for j in i + 1..d {
                let upper = given[i][j].clone();
                let lower = given[j][i].as_ref().map(|f| f.iter().map(|c| -c).collect::<Vec<_>>());
                let form = match (upper, lower) {
                    (Some(u), Some(l)) if u != l => {
                        return Err(Error::Presentation(format!(
                            "entries ({}, {}) and ({}, {}) are not antisymmetric",
                            i + 1,
                            j + 1,
                            j + 1,
                            i + 1
                        )))
                    }
                    (Some(u), _) => u,
                    (None, Some(l)) => l,
                    (None, None) => zero.clone(),
                };
                matrix[j][i] = form.iter().map(|c| -c).collect();
                matrix[i][j] = form;
            }
        }
        Ok(Presentation { d, dprime, matrix })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let entries: Vec<(usize, usize, LinearForm)> =
            doc.entries.into_iter().map(|e| (e.i, e.j, e.form)).collect();
        Presentation::from_entries(doc.d, doc.dprime, &entries)
    }

    /// Canonical JSON with nonzero entries sorted by `(i, j)`, `i < j`.
    pub fn to_json(&self) -> String {
        let mut entries = Vec::new();
        for i in 0..self.d {
            for j in i + 1..self.d {
                if self.matrix[i][j].iter().any(|&c| c != 0) {
                    entries.push(Entry {
                        i: i + 1,
                        j: j + 1,
                        form: self.matrix[i][j].clone(),
                    });
                }
            }
        }
        let doc = Document {
            d: self.d,
            dprime: self.dprime,
            entries,
        };
        serde_json::to_string_pretty(&doc).expect("presentation serializes")
    }

    /// The Heisenberg group: `d = 2`, `d' = 1`, `[x_1, x_2] = y_1`.
    pub fn heisenberg() -> Self {
        Presentation::from_entries(2, 1, &[(1, 2, vec![1])]).expect("valid")
    }

    /// Grenham's group `G_n`: `[x_i, x_n] = y_i` for `1 ≤ i ≤ n − 1`.
    pub fn grenham(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("Grenham groups need n ≥ 2"));
        }
        let entries: Vec<_> = (1..n)
            .map(|i| {
                let mut form = vec![0; n - 1];
                form[i - 1] = 1;
                (i, n, form)
            })
            .collect();
        Presentation::from_entries(n, n - 1, &entries)
    }

    /// Free class-2 nilpotent group on `d` generators: one central generator
    /// per pair `i < j`, in lexicographic order.
    pub fn free_class_two(d: usize) -> Result<Self> {
        let dprime = d * (d - 1) / 2;
        let mut entries = Vec::new();
        let mut k = 0;
        for i in 1..=d {
            for j in i + 1..=d {
                let mut form = vec![0; dprime];
                form[k] = 1;
                entries.push((i, j, form));
                k += 1;
            }
        }
        Presentation::from_entries(d, dprime, &entries)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dprime(&self) -> usize {
        self.dprime
    }

    pub fn hirsch_length(&self) -> usize {
        self.d + self.dprime
    }

    /// Linear form at 0-based position `(i, j)`.
    pub fn form(&self, i: usize, j: usize) -> &LinearForm {
        &self.matrix[i][j]
    }

    /// `M(y)_{ij}` as a polynomial in the `y_k` (0-based indices).
    pub fn entry(&self, i: usize, j: usize) -> MPoly {
        let mut out = MPoly::zero();
        for (k, &c) in self.matrix[i][j].iter().enumerate() {
            if c != 0 {
                out = &out
                    + &MPoly::monomial(
                        BigRational::from_integer(BigInt::from(c)),
                        &[(Var::Coord(k as u32 + 1), 1)],
                    );
            }
        }
        out
    }

    /// Human-readable problems that do not invalidate the presentation.
    pub fn warnings(&self) -> Vec<String> {
        (0..self.dprime)
            .filter(|&k| {
                (0..self.d).all(|i| (0..self.d).all(|j| self.matrix[i][j][k] == 0))
            })
            .map(|k| format!("y{} does not occur in any commutator; dprime is overstated", k + 1))
            .collect()
    }
}

/// The ring operations needed by the Pfaffian expansion.
pub(crate) trait PfRing: Clone {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl PfRing for MPoly {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Pfaffian of an `n × n` antisymmetric matrix by expansion along the first
/// remaining index, memoized over index subsets. The matching `(1 2)(3 4)…`
/// carries sign `+1`; odd `n` gives zero.
pub(crate) fn pfaffian_generic<T: PfRing>(
    n: usize,
    zero: T,
    one: T,
    entry: impl Fn(usize, usize) -> T,
) -> T {
    struct Ctx<'a, T> {
        zero: T,
        one: T,
        entry: &'a dyn Fn(usize, usize) -> T,
    }
    fn go<T: PfRing>(mask: u32, memo: &mut HashMap<u32, T>, ctx: &Ctx<'_, T>) -> T {
        if mask == 0 {
            return ctx.one.clone();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut acc = ctx.zero.clone();
        let mut bits = rest;
        let mut position = 0;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let term = (ctx.entry)(i, j).mul(&go(rest & !(1 << j), memo, ctx));
            acc = if position % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            position += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    if n % 2 == 1 {
        return zero;
    }
    let mut memo = HashMap::new();
    let ctx = Ctx {
        zero,
        one,
        entry: &entry,
    };
    go(((1u64 << n) - 1) as u32, &mut memo, &ctx)
}

/// Determinant by expansion over row prefixes, memoized on the set of used
/// columns.
pub(crate) fn determinant(n: usize, entry: &dyn Fn(usize, usize) -> MPoly) -> MPoly {
    let mut level: HashMap<u32, MPoly> = HashMap::new();
    level.insert(0, MPoly::one());
    for row in 0..n {
        let mut next: HashMap<u32, MPoly> = HashMap::new();
        for (mask, val) in &level {
            for col in 0..n {
                if mask >> col & 1 == 1 {
                    continue;
                }
                let a = entry(row, col);
                if a.is_zero() {
                    continue;
                }
                // Sign: parity of used columns to the right of `col`.
                let larger = (mask >> col).count_ones();
                let term = &a * val;
                let term = if larger % 2 == 1 { -term } else { term };
                let slot = next.entry(mask | 1 << col).or_insert_with(MPoly::zero);
                *slot = &*slot + &term;
            }
        }
        next.retain(|_, v| !v.is_zero());
        level = next;
    }
    level.remove(&(((1u64 << n) - 1) as u32)).unwrap_or_else(MPoly::zero)
}

/// `det M(y)`.
pub fn determinant_of(pres: &Presentation) -> MPoly {
    determinant(pres.d, &|i, j| pres.entry(i, j))
}

/// `Pf M(y)`; zero when `d` is odd. Panics if `Pf² ≠ det`.
pub fn pfaffian(pres: &Presentation) -> MPoly {
    if pres.d % 2 == 1 {
        return MPoly::zero();
    }
    let pf = pfaffian_generic(pres.d, MPoly::zero(), MPoly::one(), |i, j| pres.entry(i, j));
    let det = determinant_of(pres);
    assert_eq!(&pf * &pf, det, "Pfaffian squared differs from the determinant");
    pf
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupInvariants {
    pub d: usize,
    pub dprime: usize,
    /// `None` when `d` is odd or the determinant vanishes identically.
    #[serde(serialize_with = "serialize_opt_poly")]
    pub pfaffian: Option<MPoly>,
    pub pfaffian_degree: Option<u32>,
    pub warnings: Vec<String>,
}

fn serialize_opt_poly<S: serde::Serializer>(p: &Option<MPoly>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.serialize_str(&p.to_string()),
        None => s.serialize_none(),
    }
}

pub fn invariants(pres: &Presentation) -> GroupInvariants {
    let pf = pfaffian(pres);
    let pfaffian = (!pf.is_zero()).then_some(pf);
    GroupInvariants {
        d: pres.d,
        dprime: pres.dprime,
        pfaffian_degree: pfaffian.as_ref().map(|_| (pres.d / 2) as u32),
        pfaffian,
        warnings: pres.warnings(),
    }
}

/// The checkable hypotheses behind the smooth closed form at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub prime: u64,
    pub pf_nonzero: bool,
    /// Irreducibility over Q is never decided; it is either asserted by the
    /// caller or left unchecked.
    pub irreducible_over_q: Check,
    pub degree_preserved_mod_p: bool,
    pub smooth_mod_p: Check,
    pub line_free_mod_p: Check,
    pub good_reduction: Check,
    pub n_points: Option<u64>,
    pub notes: Vec<String>,
}

impl HypothesisReport {
    /// True when nothing checked fails and the smoothness and line checks
    /// were actually carried out (or are vacuous).
    pub fn passes(&self) -> bool {
        self.pf_nonzero
            && self.degree_preserved_mod_p
            && self.smooth_mod_p.is_ok()
            && self.line_free_mod_p.is_ok()
    }
}

/// Gathers the hypotheses at `prime`. Exceeding `budget` leaves the affected
/// fields `unchecked` instead of failing.
pub fn hypothesis_report(
    pres: &Presentation,
    prime: u64,
    assert_irreducible: bool,
    budget: u64,
) -> Result<HypothesisReport> {
    fpgeom::require_prime(prime)?;
    let pf = pfaffian(pres);
    let m = pres.dprime;
    let mut notes = Vec::new();
    let irreducible_over_q = if assert_irreducible {
        Check::Asserted
    } else {
        Check::Unchecked
    };
    if pf.is_zero() {
        notes.push("Pfaffian vanishes identically".into());
        return Ok(HypothesisReport {
            prime,
            pf_nonzero: false,
            irreducible_over_q,
            degree_preserved_mod_p: false,
            smooth_mod_p: Check::Unchecked,
            line_free_mod_p: Check::Unchecked,
            good_reduction: Check::Fails,
            n_points: None,
            notes,
        });
    }
    let reduced = fpgeom::ModPoly::new(&pf, m, prime)?;
    let degree_preserved_mod_p = reduced.total_degree() == Some(pf.total_degree());
    let n_points = match fpgeom::count_points(&pf, m, prime, budget) {
        Ok(n) => Some(n),
        Err(Error::BudgetExceeded { .. }) => {
            notes.push("point count skipped: budget exceeded".into());
            None
        }
        Err(e) => return Err(e),
    };
    let smooth_mod_p = if m == 1 {
        Check::Vacuous
    } else {
        match fpgeom::is_smooth_mod_p(&pf, m, prime, budget) {
            Ok(b) => Check::from_bool(b),
            Err(Error::BudgetExceeded { .. }) => Check::Unchecked,
            Err(e) => return Err(e),
        }
    };
    let line_free_mod_p = if m <= 2 {
        Check::Vacuous
    } else {
        match fpgeom::find_line(&pf, m, prime, budget) {
            Ok(line) => Check::from_bool(line.is_none()),
            Err(Error::BudgetExceeded { .. }) => Check::Unchecked,
            Err(e) => return Err(e),
        }
    };
    let good_reduction = if !degree_preserved_mod_p {
        Check::Fails
    } else {
        smooth_mod_p
    };
    Ok(HypothesisReport {
        prime,
        pf_nonzero: true,
        irreducible_over_q,
        degree_preserved_mod_p,
        smooth_mod_p,
        line_free_mod_p,
        good_reduction,
        n_points,
        notes,
    })
}
