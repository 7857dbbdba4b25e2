//! Acceptance criteria, one PASS/FAIL line each, with detail lines below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use quadnorm::arith;
use quadnorm::compose::Compositum;
use quadnorm::cyclicext::{conductors, period_polynomial};
use quadnorm::formclass::{minkowski, ClassGroup, Flavor};
use quadnorm::normtest::{detect_p_divisibility, local_norm_test};
use quadnorm::transfer::survey_abelian;
use quadnorm::{make_field, QuadInteger, QuadraticField};
use quadnorm_harness::groups::SurveyLine;
use quadnorm_harness::scan::{first_fundamental, scan_ds};
use quadnorm_harness::stats::stats;
use quadnorm_harness::verify::{reproduce_appendix_a, verify_composition_79, verify_example_79, Report};
use quadnorm_harness::RunConfig;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.details.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.details.push(format!("     {line}"));
    }

    fn report(&mut self, r: &Report) {
        for c in &r.claims {
            self.check(c.pass, format!("{}: expected {:?}, observed {:?}", c.claim, c.expected, c.observed));
        }
    }
}

/// Real fundamental discriminants up to `max`, as `(d, Δ)`.
fn fundamental_upto(max: i64) -> Vec<(i64, i64)> {
    (2..=max)
        .filter(|&d| arith::is_squarefree(d as u64))
        .map(|d| (d, if d % 4 == 1 { d } else { 4 * d }))
        .filter(|&(_, disc)| disc <= max)
        .collect()
}

/// Least `(a, b)` with `a² − d b² = ±1`, by increasing `b`.
fn pell_oracle(d: i64) -> (i64, i64) {
    (1i64..)
        .find_map(|b| {
            let t = d * b * b;
            [t + 1, t - 1].into_iter().find_map(|s| {
                let a = arith::isqrt(s as u64) as i64;
                (a * a == s).then_some((a, b))
            })
        })
        .unwrap()
}

/// `b²c² − 4c³ − 4b³d − 27d² + 18bcd` for the monic cubic `x³ + bx² + cx + d`.
fn cubic_disc_oracle(b: i128, c: i128, d: i128) -> i128 {
    b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d + 18 * b * c * d
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let r = verify_example_79();
    o.report(&r);
    o.check(minkowski::wide_class_number(316) == 3, "oracle h(316) = 3".into());
    o.check(pell_oracle(79) == (80, 9), format!("oracle ε = {:?}", pell_oracle(79)));
    o.note("the field-norm index at an inert conductor is always 1; see README".into());
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let r = reproduce_appendix_a();
    o.report(&r);
    o.check(cubic_disc_oracle(-18, 101, -167) == 49, "oracle cubic discriminant = 49".into());
    o.check(cubic_disc_oracle(1, -2, -1) == 49, "oracle conductor-7 discriminant = 49".into());
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let discs = fundamental_upto(2000);
    let mismatches: Vec<i64> = discs
        .iter()
        .filter(|&&(_, disc)| ClassGroup::for_discriminant(disc).h(Flavor::Wide) != minkowski::wide_class_number(disc))
        .map(|&(_, disc)| disc)
        .collect();
    o.check(
        mismatches.is_empty(),
        format!("{} fundamental discriminants, mismatches {mismatches:?}", discs.len()),
    );
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let cfg = RunConfig {
        qmax: 60,
        ..RunConfig::default()
    };
    let records = scan_ds(&first_fundamental(5000), &cfg).expect("scan");
    o.note(format!(
        "{} records, largest Δ {}",
        records.len(),
        records.iter().map(|r| r.disc).max().unwrap()
    ));
    let oracle_mismatch = records
        .iter()
        .filter(|r| minkowski::wide_class_number(r.disc) != r.h)
        .count();
    o.check(oracle_mismatch == 0, format!("scan h vs Minkowski oracle: {oracle_mismatch} mismatches"));
    for (p, tol) in [(3u64, 0.035), (5, 0.02)] {
        let s = stats(&records, p).expect("nonempty");
        let dev = s.abs_deviation.unwrap();
        o.check(
            dev <= tol,
            format!(
                "p={p}: observed {} ({}), predicted {}, deviation {} (tolerance {tol})",
                s.fraction,
                s.fraction_exact,
                s.predicted.unwrap(),
                s.deviation.unwrap()
            ),
        );
    }
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let qmax = 1000;
    let mut witnesses = 0;
    let mut counterexamples = Vec::new();
    let mut gaps = Vec::new();
    for d in (2..=500).filter(|&d| arith::is_squarefree(d)) {
        let field = make_field(d as i64).unwrap();
        let h = minkowski::wide_class_number(field.disc());
        for p in [3, 5] {
            let v = detect_p_divisibility(&field, p, qmax);
            if v.divisible() {
                witnesses += 1;
                if h % p != 0 {
                    counterexamples.push((d, p));
                }
            } else if h % p == 0 {
                gaps.push((d, p));
            }
        }
    }
    o.check(
        counterexamples.is_empty(),
        format!("witnesses {witnesses}, counterexamples {counterexamples:?} (qmax {qmax})"),
    );
    o.note(format!("converse gaps (p | h, no witness): {} {:?}", gaps.len(), gaps));
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let records = survey_abelian(36);
    let lines: Vec<SurveyLine> = records.iter().map(SurveyLine::from).collect();
    let groups: std::collections::BTreeSet<&Vec<u64>> = records.iter().map(|r| &r.moduli).collect();
    o.note(format!("{} groups, {} (G, H) instances", groups.len(), records.len()));
    let disagree = records.iter().filter(|r| !r.oracle_agrees).count();
    o.check(disagree == 0, format!("transfer vs direct oracle: {disagree} disagreements"));
    let klein: Vec<&SurveyLine> = lines
        .iter()
        .filter(|l| l.invariants == [2, 2] && l.subgroup_order == 2)
        .collect();
    o.check(
        !klein.is_empty() && klein.iter().all(|l| l.vanishes && l.hypothesis),
        format!("(Z/2)^2 with |H| = 2 vanishes in all {} instances", klein.len()),
    );
    let z4 = lines
        .iter()
        .find(|l| l.invariants == [4] && l.subgroup_order == 2)
        .unwrap();
    o.check(z4.discrepancy, format!("Z/4 discrepancy record {}", serde_json::to_string(z4).unwrap()));
    let non_commuting = records.iter().filter(|r| !r.diagram_commutes).count();
    o.check(non_commuting == 0, format!("diagram_check violations in {non_commuting} instances"));
    let discrepancies = lines.iter().filter(|l| l.discrepancy).count();
    o.note(format!("instances with hypothesis but no vanishing: {discrepancies}"));
    o
}

fn random_element(m: &Compositum, rng: &mut StdRng, r: i64) -> quadnorm::compose::RelativeElement {
    let coords: Vec<i64> = (0..2 * m.desc().degree()).map(|_| rng.gen_range(-r..=r)).collect();
    m.from_omega_coords(&coords)
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let mut literal_fail = 0;
    let mut total = 0;
    let mut basis_fail = 0;
    let mut examples = Vec::new();
    for p in [3u64, 5] {
        for n in [1u32, 2] {
            for q in conductors(p, n, 1000) {
                let desc = period_polynomial(q, p, n).unwrap();
                let e = desc.degree();
                let expected = BigInt::from(q).pow((e - 1) as u32);
                total += 1;
                if desc.basis_discriminant() != expected {
                    basis_fail += 1;
                }
                if *desc.poly_discriminant() != expected {
                    literal_fail += 1;
                    if examples.len() < 4 {
                        examples.push(format!("(q={q}, p^n={e}, index {})", desc.power_basis_index()));
                    }
                }
            }
        }
    }
    o.check(
        literal_fail == 0,
        format!("disc(period_poly) = q^(p^n-1): {literal_fail} of {total} conductors differ, e.g. {}", examples.join(", ")),
    );
    o.note(format!("period-basis discriminant = q^(p^n-1): {} of {total} hold", total - basis_fail));

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let setups: Vec<(QuadraticField, u64, u64)> = vec![
        (make_field(79).unwrap(), 37, 3),
        (make_field(10).unwrap(), 7, 3),
        (make_field(229).unwrap(), 31, 5),
        (make_field(2).unwrap(), 13, 3),
    ];
    let descs: Vec<_> = setups.iter().map(|(_, q, p)| period_polynomial(*q, *p, 1).unwrap()).collect();
    let comps: Vec<Compositum> = setups.iter().zip(&descs).map(|((f, _, _), d)| Compositum::new(f, d).unwrap()).collect();
    let mut mult_fail = 0;
    for i in 0..10_000 {
        let m = &comps[i % comps.len()];
        let a = random_element(m, &mut rng, 6);
        let b = random_element(m, &mut rng, 6);
        if m.relative_norm(&m.mul(&a, &b)) != &m.relative_norm(&a) * &m.relative_norm(&b) {
            mult_fail += 1;
        }
    }
    o.check(mult_fail == 0, format!("relative_norm multiplicativity: {mult_fail} failures in 10000 pairs"));
    let mut cp_fail = 0;
    for i in 0..1000 {
        let m = &comps[i % comps.len()];
        let a = random_element(m, &mut rng, 9);
        let e = m.desc().degree();
        let norm = m.relative_norm(&a);
        let expected: QuadInteger = if e % 2 == 0 { norm } else { -norm };
        if *m.charpoly_over_n(&a).constant() != expected {
            cp_fail += 1;
        }
    }
    o.check(cp_fail == 0, format!("charpoly constant = (-1)^e Norm: {cp_fail} failures in 1000 elements"));

    let mut lift_fail = 0;
    let mut lift_total = 0;
    for d in (2..=300).filter(|&d| arith::is_squarefree(d)) {
        let field = make_field(d as i64).unwrap();
        let eps = field.fundamental_unit().value;
        for q in [7u64, 13, 19, 31, 37] {
            if field.disc() % q as i64 == 0 {
                continue;
            }
            let desc = period_polynomial(q, 3, 1).unwrap();
            for prime in field.primes_above(q).unwrap() {
                let v = local_norm_test(&field, &eps, &desc, prime).unwrap();
                for _ in 0..3 {
                    let shift = field.from_omega(rng.gen_range(-50i64..=50) * q as i64, rng.gen_range(-50i64..=50) * q as i64);
                    let lifted = field.reduce_at(&(&eps + &shift), prime).pow(v.exponent_used);
                    lift_total += 1;
                    if lifted != v.power_value || lifted.is_one() != v.is_norm {
                        lift_fail += 1;
                    }
                }
            }
        }
    }
    o.check(
        lift_fail == 0,
        format!("local test invariant under change of representative: {lift_fail} failures in {lift_total}"),
    );
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let cfg = RunConfig::default();
    let first = verify_composition_79(cfg.bound);
    o.report(&first);
    let second = verify_composition_79(cfg.bound);
    o.check(first == second, "search outcome and report identical across two runs".into());
    o
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 8] = [
        (1, "verify ex79", criterion_1, Duration::from_secs(5)),
        (2, "verify appendixa", criterion_2, Duration::from_secs(5)),
        (3, "class number: forms vs Minkowski bound, fundamental Δ ≤ 2000", criterion_3, Duration::from_secs(600)),
        (4, "Cohen-Lenstra frequencies, first 5000 real fundamental discriminants", criterion_4, Duration::from_secs(1800)),
        (5, "detect soundness, d ≤ 500, p ∈ {3, 5}", criterion_5, Duration::from_secs(u64::MAX / 4)),
        (6, "transfer survey, abelian |G| ≤ 36", criterion_6, Duration::from_secs(120)),
        (7, "exact identity suites", criterion_7, Duration::from_secs(u64::MAX / 4)),
        (8, "composition law, d = 79, classes c and c^2", criterion_8, Duration::from_secs(u64::MAX / 4)),
    ];
    let mut failed = Vec::new();
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if limit < Duration::from_secs(u64::MAX / 8) {
            outcome.check(elapsed < limit, format!("runtime {:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs()));
        }
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {id}: {name} [{:.2}s]", elapsed.as_secs_f64());
        for line in &outcome.details {
            println!("    {line}");
        }
        if !outcome.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
