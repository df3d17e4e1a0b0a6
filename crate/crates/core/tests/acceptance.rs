//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zetaforge::exactalg::{parse_poly, parse_ratfn, series_coefficients, RatFn};
use zetaforge::flagcomb::{check_flag_funeq, verify_schubert_symmetry};
use zetaforge::fpgeom::{
    common_isotropic_subspace, count_points, fano_count, is_isotropic, pencil_all_degenerate, rank_mod_p,
    SkewForm,
};
use zetaforge::grouppres::{pfaffian, Presentation};
use zetaforge::oracle::{count_lattices_of_type, ideal_counts, types_up_to};
use zetaforge::zetacore::{
    b0_closed_form, b0_double_sum, expected_symmetry, grenham_zeta, normal_zeta_smooth, smooth_components,
    verify_funeq, zeta_lattice, zeta_p_shift, LocalZeta, PointCount,
};

const BUDGET: u64 = 1 << 40;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "flag functional equation, n = 2..6", limit: Some(Duration::from_secs(120)), run: flag_funeq },
        Criterion { id: 2, name: "Schubert symmetry, n <= 7", limit: Some(Duration::from_secs(60)), run: schubert },
        Criterion { id: 3, name: "lattice type counts, w <= 4, d' <= 3, p in {2,3}", limit: None, run: lattice_types },
        Criterion { id: 4, name: "Heisenberg end to end", limit: Some(Duration::from_secs(60)), run: heisenberg },
        Criterion { id: 5, name: "Grenham G_3, G_4 and functional equations", limit: None, run: grenham },
        Criterion { id: 6, name: "d = 4, d' = 2 with Pf = y1^2 + y2^2", limit: Some(Duration::from_secs(600)), run: sum_of_squares },
        Criterion { id: 7, name: "functional equation reports and components", limit: None, run: funeq_reports },
        Criterion { id: 8, name: "Klein quadric point and Fano counts", limit: Some(Duration::from_secs(300)), run: klein },
        Criterion { id: 9, name: "B0 closed form against the double sum", limit: None, run: b0 },
        Criterion { id: 10, name: "isotropic subspaces of pencils", limit: None, run: pencils },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took longer than {limit:?}")),
            (o, _) => o,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("{status} [{:>2}] {} ({:.2?}): {detail}", c.id, c.name, elapsed);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn flag_funeq() -> Outcome {
    for n in 2..=6 {
        ensure(check_flag_funeq(n).map_err(err)?, || format!("fails at n = {n}"))?;
    }
    Ok("holds for all n".into())
}

fn schubert() -> Outcome {
    let mut perms = 0;
    for n in 1..=7 {
        let report = verify_schubert_symmetry(n).map_err(err)?;
        ensure(report.holds(), || format!("n = {n}: {report:?}"))?;
        perms += report.permutations_checked;
    }
    Ok(format!("{perms} permutations checked"))
}

fn lattice_types() -> Outcome {
    let mut checked = 0;
    for dprime in 1..=3 {
        for p in [2, 3] {
            for (ft, r) in types_up_to(dprime, 4) {
                let c = count_lattices_of_type(&ft, &r, p, BUDGET).map_err(err)?;
                ensure(c.agrees(), || format!("{c:?}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (type, prime) pairs agree"))
}

fn compare_series(z: &LocalZeta, pres: &Presentation, p: u64, n: u32) -> Result<(), String> {
    let closed = z.series(p as i64, n as usize).map_err(err)?;
    let counted = ideal_counts(pres, p, n, BUDGET).map_err(err)?;
    ensure(closed == counted, || {
        format!("p = {p}: closed form {closed:?} but counts {counted:?}")
    })
}

fn heisenberg() -> Outcome {
    let h = Presentation::heisenberg();
    let smooth = normal_zeta_smooth(&h, PointCount::Zero).map_err(err)?;
    let grenham = grenham_zeta(2).map_err(err)?;
    let expected = parse_ratfn("1/((1 - t)*(1 - p*t)*(1 - p^2*t^3))").map_err(err)?;
    ensure(smooth.value == expected, || format!("smooth form gives {}", smooth.value))?;
    ensure(grenham.value == expected, || format!("Grenham form gives {}", grenham.value))?;
    for p in [2, 3, 5] {
        compare_series(&smooth, &h, p, 6)?;
    }
    Ok(format!("{expected}; series agree at p = 2, 3, 5 to t^6"))
}

fn grenham() -> Outcome {
    for (n, order) in [(3, 5), (4, 3)] {
        let z = grenham_zeta(n).map_err(err)?;
        let pres = Presentation::grenham(n as usize).map_err(err)?;
        for p in [2, 3] {
            compare_series(&z, &pres, p, order)?;
        }
    }
    for n in 2..=5 {
        let report = verify_funeq(&grenham_zeta(n).map_err(err)?).map_err(err)?;
        ensure(report.holds && report.observed == Some(expected_symmetry(n, n - 1)), || {
            format!("n = {n}: {report:?}")
        })?;
    }
    Ok("G_3 to t^5 and G_4 to t^3 agree at p = 2, 3; symmetry holds for n = 2..5".into())
}

fn sum_of_squares_presentation() -> Presentation {
    Presentation::from_entries(
        4,
        2,
        &[(1, 3, vec![1, 0]), (1, 4, vec![0, 1]), (2, 3, vec![0, 1]), (2, 4, vec![-1, 0])],
    )
    .expect("valid presentation")
}

fn sum_of_squares() -> Outcome {
    let pres = sum_of_squares_presentation();
    let pf = pfaffian(&pres);
    ensure(pf == parse_poly("y1^2 + y2^2").map_err(err)?, || format!("Pfaffian is {pf}"))?;
    for (p, n_p, order) in [(3, 0, 4), (5, 2, 4), (13, 2, 3)] {
        let counted = count_points(&pf, 2, p, BUDGET).map_err(err)?;
        ensure(counted == n_p, || format!("n_P({p}) = {counted}, expected {n_p}"))?;
        let z = normal_zeta_smooth(&pres, PointCount::constant(n_p as i64)).map_err(err)?;
        compare_series(&z, &pres, p, order)?;
    }
    Ok("agrees at p = 3, 5 to t^4 and p = 13 to t^3".into())
}

fn components_zeta(d: u32, dprime: u32) -> Result<LocalZeta, String> {
    let (a0, a1) = smooth_components(d, dprime).map_err(err)?;
    let pre = &zeta_lattice(d).map_err(err)? * &zeta_p_shift(d + dprime, d * dprime).map_err(err)?;
    let w0 = &pre * &a0;
    let w1 = &pre * &a1;
    Ok(LocalZeta {
        value: w0.clone(),
        d,
        dprime,
        n_p: PointCount::Symbolic,
        components: Some((w0, w1)),
    })
}

fn funeq_reports() -> Outcome {
    let mut cases: Vec<(String, LocalZeta)> = vec![(
        "Heisenberg".into(),
        normal_zeta_smooth(&Presentation::heisenberg(), PointCount::Zero).map_err(err)?,
    )];
    for n_p in 0..=3 {
        cases.push((
            format!("d4/d'2 with n_P = {n_p}"),
            normal_zeta_smooth(&sum_of_squares_presentation(), PointCount::constant(n_p)).map_err(err)?,
        ));
    }
    for n in 2..=5 {
        cases.push((format!("G_{n}"), grenham_zeta(n).map_err(err)?));
    }
    for (name, z) in &cases {
        let report = verify_funeq(z).map_err(err)?;
        let expected = expected_symmetry(z.d, z.dprime);
        ensure(report.holds && report.observed == Some(expected), || {
            format!("{name}: {report:?}")
        })?;
    }
    let mut shapes = 0;
    for d in [2, 4, 6, 8] {
        for dprime in 1..=4 {
            let z = components_zeta(d, dprime)?;
            let report = verify_funeq(&z).map_err(err)?;
            let components = report.components.as_ref().ok_or("no component report")?;
            ensure(components.holds(), || {
                format!("d = {d}, d' = {dprime}: {components:?}")
            })?;
            shapes += 1;
        }
    }
    Ok(format!("{} closed forms and {shapes} component shapes", cases.len()))
}

fn klein() -> Outcome {
    let pres = Presentation::free_class_two(4).map_err(err)?;
    let pf = pfaffian(&pres);
    let mut found = Vec::new();
    for p in [2u64, 3] {
        let expected = [
            (p * p + 1) * (p * p + p + 1),
            (p + 1) * (p * p + 1) * (p * p + p + 1),
            2 * (p * p + 1) * (p + 1),
        ];
        let points = count_points(&pf, 6, p, BUDGET).map_err(err)?;
        ensure(points == expected[0], || format!("p = {p}: {points} points"))?;
        for (k, &e) in expected.iter().enumerate() {
            let c = fano_count(&pf, 6, p, k, BUDGET).map_err(err)?;
            ensure(c == e, || format!("p = {p}, k = {k}: {c}, expected {e}"))?;
            found.push(c);
        }
    }
    Ok(format!("counts {found:?}"))
}

fn b0() -> Outcome {
    for (d, dprime) in [(4, 2), (4, 3), (6, 3)] {
        let closed: RatFn = b0_closed_form(d, dprime).map_err(err)?;
        for p in [2i64, 3] {
            let series = series_coefficients(&closed, p, 8).map_err(err)?;
            let sum = b0_double_sum(d, dprime, p, 8).map_err(err)?;
            let series: Vec<_> = series.iter().map(|c| c.to_integer()).collect::<Vec<BigInt>>();
            ensure(series == sum, || {
                format!("(d, d') = ({d}, {dprime}), p = {p}: {series:?} vs {sum:?}")
            })?;
        }
    }
    Ok("identity holds to order 8".into())
}

fn random_form(rng: &mut ChaCha8Rng, q: u64, n: usize) -> SkewForm {
    let upper: Vec<u64> = (0..n * (n.max(1) - 1) / 2).map(|_| rng.gen_range(0..q)).collect();
    SkewForm::from_upper(q, n, &upper).expect("valid form")
}

fn check_subspace(phi: &SkewForm, psi: &SkewForm, target: usize) -> Result<bool, String> {
    let basis = common_isotropic_subspace(phi, psi, target, BUDGET).map_err(err)?;
    Ok(basis.is_some_and(|b| {
        b.len() == target
            && rank_mod_p(&b, phi.field_size()) == target
            && is_isotropic(phi, &b)
            && is_isotropic(psi, &b)
    }))
}

fn pencils() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut drawn = 0;
    for (q, r) in [(2u64, 2usize), (3, 2), (2, 3)] {
        let mut accepted = 0;
        while accepted < 100 {
            let phi = random_form(&mut rng, q, 2 * r);
            let psi = random_form(&mut rng, q, 2 * r);
            drawn += 1;
            if !pencil_all_degenerate(&phi, &psi).map_err(err)? {
                continue;
            }
            accepted += 1;
            ensure(check_subspace(&phi, &psi, r + 1)?, || {
                format!("q = {q}, r = {r}: no isotropic subspace of dimension {} for {phi:?}, {psi:?}", r + 1)
            })?;
        }
    }
    let mut pairs = 0;
    for n in 1..=6 {
        let target = (n + 1) / 2;
        let forms = |rng: &mut ChaCha8Rng| -> Vec<(SkewForm, SkewForm)> {
            let edges = n * (n - 1) / 2;
            if edges <= 6 {
                let all: Vec<SkewForm> = (0..1u64 << edges)
                    .map(|bits| {
                        let upper: Vec<u64> = (0..edges).map(|i| bits >> i & 1).collect();
                        SkewForm::from_upper(2, n, &upper).expect("valid form")
                    })
                    .collect();
                all.iter()
                    .flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone())))
                    .collect()
            } else {
                (0..2000).map(|_| (random_form(rng, 2, n), random_form(rng, 2, n))).collect()
            }
        };
        for (phi, psi) in forms(&mut rng) {
            ensure(check_subspace(&phi, &psi, target)?, || {
                format!("n = {n}: no isotropic subspace of dimension {target} for {phi:?}, {psi:?}")
            })?;
            pairs += 1;
        }
    }
    Ok(format!(
        "300 degenerate pencils from {drawn} draws; {pairs} pencils over F_2 in dimensions 1..6"
    ))
}
