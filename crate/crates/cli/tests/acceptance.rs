//! Acceptance criteria 1-13. Each criterion prints one PASS/FAIL line with its
//! elapsed time against a pinned limit; the run exits nonzero if any criterion fails.
//! Runs without the libtest harness so the lines are always shown.

use num_bigint::BigInt;
use serde_json::Value;
use sk3_cli::fixtures::{load_dir, run_fixture};
use sk3_core::bqf::{
    automorphism_group, class_group, compose, reduce, reduced_forms, two_torsion_scan,
    BinaryQuadraticForm,
};
use sk3_core::ellsurf::field::rat;
use sk3_core::ellsurf::weierstrass::{example_rational_model, family_model, inose_model};
use sk3_core::ellsurf::{
    analyze_section, fiber_survey, parse_fe, parse_ratfun, shioda_tate, torsion_embeds, Fe,
    FiberSurvey, KodairaType, SectionData,
};
use sk3_core::k3enriques::classify::deg_h4d_over_hd;
use sk3_core::k3enriques::jfunc::terms_for;
use sk3_core::k3enriques::{
    base_change_enriques, class_number_one_discriminants, cm_points, enriques_admissible,
    exception_list, inose_pencil, j_cm, ExtraFibers, Verdict,
};
use sk3_core::lattice::{
    build_lattice, disc_forms_isomorphic, discriminant_form, ns_from_fibration,
    rank2_forms_by_disc_form, smith_invariants, EvenLattice, RootType, SectionGlue,
};
use std::path::Path;
use std::time::{Duration, Instant};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn form(a: i64, b: i64, c: i64) -> BinaryQuadraticForm {
    BinaryQuadraticForm::from_i64(a, b, c).unwrap()
}

fn summary(s: &FiberSurvey) -> Vec<String> {
    let mut v: Vec<String> = s
        .fibers
        .iter()
        .map(|e| format!("{}@{}", e.fiber.kind, e.place))
        .collect();
    if s.residual_i1 > 0 {
        v.push(format!("{}xI1@residual", s.residual_i1));
    }
    v
}

fn counts(s: &FiberSurvey) -> Vec<(KodairaType, usize)> {
    s.type_counts()
}

fn discriminants(bound: i64) -> impl Iterator<Item = i64> {
    (3..=bound).map(|n| -n).filter(|d| d.rem_euclid(4) <= 1)
}

// 1: fibres of the rational surface with a six-torsion section
fn rational_survey() -> Check {
    let w = example_rational_model();
    let s = fiber_survey(&w).map_err(|e| e.to_string())?;
    let got = summary(&s);
    ensure(got == ["I1@-8", "I3@0", "I2@1", "I6@inf"], || {
        format!("fibres {got:?}")
    })?;
    ensure(s.euler_sum == 12 && s.chi == 1, || {
        format!("euler sum {}", s.euler_sum)
    })?;
    let st = shioda_tate(&s.all_fibers(), 0, 6, &rat(1, 1)).map_err(|e| e.to_string())?;
    ensure(st.rho == 10 && st.ns_disc == BigInt::from(-1), || {
        format!("{st:?}")
    })?;
    ensure(w.invariants().identity_holds(), || {
        "c4^3 - c6^2 != 1728 disc".into()
    })
}

// 2: the quadratic base change is a K3 with NS of discriminant -12, transcendental form (1,0,3)
fn k3_base_change() -> Check {
    let phi = parse_ratfun("-8*t^2/(t^2-1)").map_err(|e| e.to_string())?;
    let w = example_rational_model()
        .base_change(&phi)
        .map_err(|e| e.to_string())?;
    ensure(w.invariants().identity_holds(), || {
        "identity fails after base change".into()
    })?;
    let s = fiber_survey(&w).map_err(|e| e.to_string())?;
    let c = counts(&s);
    ensure(
        c == [(KodairaType::I(2), 3), (KodairaType::I(6), 3)] && s.euler_sum == 24,
        || format!("fibres {c:?}, euler sum {}", s.euler_sum),
    )?;
    let st = shioda_tate(&s.all_fibers(), 0, 12, &rat(1, 1)).map_err(|e| e.to_string())?;
    ensure(
        torsion_embeds(&s.all_fibers(), &[2, 6]) && !torsion_embeds(&s.all_fibers(), &[12]),
        || "twelve torsion must be Z/2 x Z/6".into(),
    )?;
    ensure(st.rho == 20 && st.ns_disc == BigInt::from(-12), || {
        format!("{st:?}")
    })?;
    let fibres = [
        RootType::A(5),
        RootType::A(5),
        RootType::A(5),
        RootType::A(1),
        RootType::A(1),
        RootType::A(1),
    ];
    let glue = [
        SectionGlue {
            po: 0,
            components: vec![2, 1, 1, 1, 1, 0],
        },
        SectionGlue {
            po: 0,
            components: vec![3, 3, 0, 1, 0, 1],
        },
    ];
    let f = ns_from_fibration(2, &fibres, &glue).map_err(|e| e.to_string())?;
    ensure(f.ns.det() == BigInt::from(-12), || {
        format!("det NS = {}", f.ns.det())
    })?;
    let q = discriminant_form(&f.ns).map_err(|e| e.to_string())?;
    let t = rank2_forms_by_disc_form(&BigInt::from(-12), &q, -1).map_err(|e| e.to_string())?;
    ensure(t == [form(1, 0, 3)], || {
        format!("transcendental candidates {t:?}")
    })
}

// 3: Inose fibration with A = 2, B = 3, and its base change by u^2
fn inose_fibration() -> Check {
    let w = inose_model(&Fe::from_int(2), &Fe::from_int(3), 1).map_err(|e| e.to_string())?;
    let s = fiber_survey(&w).map_err(|e| e.to_string())?;
    let c = counts(&s);
    ensure(
        c == [(KodairaType::I(1), 4), (KodairaType::IIStar, 2)],
        || format!("fibres {c:?}"),
    )?;
    let u2 = parse_ratfun("t^2").map_err(|e| e.to_string())?;
    let b = w.base_change(&u2).map_err(|e| e.to_string())?;
    let s = fiber_survey(&b).map_err(|e| e.to_string())?;
    let got = summary(&s);
    ensure(
        got == ["IV*@0", "IV*@inf", "8xI1@residual"] && s.euler_sum == 24,
        || format!("after u^2: {got:?}, euler sum {}", s.euler_sum),
    )
}

// 4: the one-parameter family at a = 1
fn family_fibres() -> Check {
    let w = family_model(&Fe::from_int(1), 1).map_err(|e| e.to_string())?;
    let s = fiber_survey(&w).map_err(|e| e.to_string())?;
    let got = summary(&s);
    ensure(
        got[..3] == ["III*@0", "I4@1", "III*@inf"] && s.euler_sum == 24,
        || format!("fibres {got:?}, euler sum {}", s.euler_sum),
    )
}

// 5: a section of height 3 on the family at a = 1/9 over Q(sqrt(-3))
fn height_three() -> Check {
    let a = parse_fe("1/9").map_err(|e| e.to_string())?;
    let w = family_model(&a, -3).map_err(|e| e.to_string())?;
    let x = parse_ratfun("-12t^3/(9t-1)^2").map_err(|e| e.to_string())?;
    let y = parse_ratfun("2/9*sqrt(-3)*t^3*(9t+1)*(81t^2-36t+1)/(9t-1)^3")
        .map_err(|e| e.to_string())?;
    ensure(w.contains(&x, &y), || "point is not on the curve".into())?;
    let h = analyze_section(&w, &SectionData::Point { x, y }).map_err(|e| e.to_string())?;
    ensure(
        h.height == rat(3, 1) && h.po == Some(1) && h.chi == 2,
        || format!("height {}, P.O {:?}, chi {}", h.height, h.po, h.chi),
    )
}

// |b| <= a <= c with b >= 0 on the boundary
fn count_reduced(d: i64) -> usize {
    let mut n = 0;
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c >= a && !(a == c && b < 0) {
                    n += 1;
                }
            }
        }
        a += 1;
    }
    n
}

// 6: admissibility over every reduced form with |d| <= 1000, imprimitive ones included
fn admissibility_exhaustive() -> Check {
    let mut n = 0usize;
    for d in discriminants(1000) {
        let bd = BigInt::from(d);
        for q in reduced_forms(&bd, false).map_err(|e| e.to_string())? {
            let expected =
                !(d.rem_euclid(8) == 5 || d == -4 || d == -8 || (d == -16 && q == form(1, 0, 4)));
            let got = enriques_admissible(&q).admissible;
            ensure(got == expected, || format!("{q}: admissible = {got}"))?;
            if q.is_primitive() {
                let v = base_change_enriques(&q).map_err(|e| e.to_string())?.verdict;
                ensure((v == Verdict::No) == !expected, || {
                    format!("{q}: verdict {v}")
                })?;
            }
            n += 1;
        }
    }
    let brute = discriminants(1000).map(count_reduced).sum::<usize>();
    ensure(n == brute, || {
        format!("{n} reduced forms, brute force finds {brute}")
    })?;
    ensure(enriques_admissible(&form(2, 0, 2)).admissible, || {
        "(2,0,2) rejected".into()
    })
}

// 7: two-torsion class groups and the exception list
fn exceptions() -> Check {
    let scan = two_torsion_scan(7392);
    let even = scan.iter().filter(|d| *d % 2 == 0).count();
    ensure(scan.len() == 101 && even == 65, || {
        format!("{} discriminants, {even} even", scan.len())
    })?;
    let ex = exception_list();
    ensure(ex.len() == 62, || format!("{} exceptions", ex.len()))?;
    ensure(ex.contains(&form(1, 0, 1848)), || {
        "(1,0,1848) missing".into()
    })?;
    for q in &ex {
        let v = base_change_enriques(q).map_err(|e| e.to_string())?.verdict;
        ensure(v == Verdict::Exception, || format!("{q}: verdict {v}"))?;
    }
    Ok(())
}

// 8: class number one
fn class_number_one() -> Check {
    let got = class_number_one_discriminants().map_err(|e| e.to_string())?;
    let want = [-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163];
    let mut sorted = got.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    ensure(sorted == want, || format!("{got:?}"))
}

// 9: certified j-invariants, stable when the precision doubles
fn j_certification() -> Check {
    for (q, want) in [((1, 1, 1), 0i64), ((1, 0, 1), 1728), ((1, 0, 3), 54000)] {
        let tau = cm_points(&form(q.0, q.1, q.2))
            .map_err(|e| e.to_string())?
            .tau;
        let mut certs = Vec::new();
        for bits in [256, 512] {
            let j = j_cm(&tau, bits, terms_for(&tau, bits)).map_err(|e| e.to_string())?;
            ensure(j.tail_bound_log2 < -(bits as f64) / 2.0, || {
                format!("tail {}", j.tail_bound_log2)
            })?;
            certs.push(j.certified);
        }
        ensure(certs.iter().all(|c| *c == Some(BigInt::from(want))), || {
            format!("j for {q:?}: {certs:?}")
        })?;
    }
    Ok(())
}

// 10: Inose pencil coefficients for (1,0,3)
fn inose_coefficients() -> Check {
    let data = inose_pencil(&form(1, 0, 3), 256).map_err(|e| e.to_string())?;
    ensure(data.a_cubed.exact == Some(rat(15625, 16)), || {
        format!("A^3 = {:?}", data.a_cubed)
    })?;
    ensure(data.b_squared.exact == Some(rat(14641, 16)), || {
        format!("B^2 = {:?}", data.b_squared)
    })?;
    ensure(
        data.mw_rank == 1 && data.extra_fibers == ExtraFibers::I2,
        || format!("row ({}, {})", data.mw_rank, data.extra_fibers),
    )
}

// 11: [H(4d) : H(d)]
fn degrees() -> Check {
    let got: Vec<u8> = [-7, -12, -11]
        .iter()
        .map(|d| deg_h4d_over_hd(&BigInt::from(*d)))
        .collect();
    ensure(got == [1, 2, 3], || format!("{got:?}"))
}

// 12: discriminant forms separate lattices with equal Smith invariants
fn discriminant_forms() -> Check {
    let d4 = build_lattice("D4(-1)").map_err(|e| e.to_string())?;
    let q = discriminant_form(&d4).map_err(|e| e.to_string())?;
    let vals = q.nonzero_q_multiset();
    ensure(
        vals.len() == 3 && vals.iter().all(|v| *v == rat(1, 1)),
        || format!("q values {vals:?}"),
    )?;
    let a = EvenLattice::from_form(&form(1, 0, 3));
    let b = EvenLattice::from_form(&form(2, 2, 2));
    let sa = smith_invariants(&a.gram).map_err(|e| e.to_string())?;
    let sb = smith_invariants(&b.gram).map_err(|e| e.to_string())?;
    let six = vec![BigInt::from(2), BigInt::from(6)];
    ensure(sa == six && sb == six, || format!("Smith {sa:?} {sb:?}"))?;
    let qa = discriminant_form(&a).map_err(|e| e.to_string())?;
    let qb = discriminant_form(&b).map_err(|e| e.to_string())?;
    let iso = disc_forms_isomorphic(&qa, &qb, false).map_err(|e| e.to_string())?;
    ensure(iso.is_none(), || {
        "diag(2,6) and (2,2,2) reported isomorphic".into()
    })
}

// 13: class group axioms, ambiguous classes, and invariants over the fixture corpus
fn properties() -> Check {
    for d in discriminants(500) {
        let bd = BigInt::from(d);
        let g = class_group(&bd).map_err(|e| e.to_string())?;
        let id = BinaryQuadraticForm::principal(&bd).map_err(|e| e.to_string())?;
        let el = &g.elements;
        let c = |x: &BinaryQuadraticForm, y: &BinaryQuadraticForm| {
            compose(x, y).map_err(|e| e.to_string())
        };
        for x in el {
            ensure(c(x, &id)? == *x, || format!("{x} * 1"))?;
            ensure(c(x, &x.inverse())?.is_principal(), || {
                format!("{x} * {x}^-1")
            })?;
            for y in el {
                let xy = c(x, y)?;
                ensure(xy == c(y, x)?, || format!("{x} {y} commute"))?;
                ensure(el.contains(&xy), || format!("{x} * {y} = {xy} not reduced"))?;
            }
            for y in el.iter().take(8) {
                for z in el.iter().take(8) {
                    ensure(c(&c(x, y)?, z)? == c(x, &c(y, z)?)?, || {
                        format!("({x} {y}) {z}")
                    })?;
                }
            }
            let aut = automorphism_group(&reduce(x).form).map_err(|e| e.to_string())?;
            let square_trivial = c(x, x)?.is_principal();
            ensure((aut.order > 2) == square_trivial, || {
                format!(
                    "{x}: |Aut| = {}, square principal {square_trivial}",
                    aut.order
                )
            })?;
        }
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let fixtures = load_dir(&dir).map_err(|e| e.to_string())?;
    let mut surveyed = 0;
    for (path, f) in &fixtures {
        if f.args.first().map(String::as_str) != Some("ellsurf") {
            continue;
        }
        let r = run_fixture(path, f);
        let rep = r.report.ok_or_else(|| format!("{}: no report", f.name))?;
        let sub = f.args[1].as_str();
        if sub == "basechange" || sub == "twist" {
            ensure(
                rep.pointer("/result/identity_holds") == Some(&Value::Bool(true)),
                || format!("{}: identity fails", f.name),
            )?;
        }
        let euler = rep
            .pointer("/result/euler_sum")
            .or_else(|| rep.pointer("/result/survey/euler_sum"))
            .and_then(Value::as_u64);
        if let Some(e) = euler {
            ensure(e == 12 || e == 24, || format!("{}: euler sum {e}", f.name))?;
            surveyed += 1;
        }
    }
    ensure(surveyed >= 8, || {
        format!("only {surveyed} surveyed fixtures")
    })
}

fn main() {
    let criteria: [(u32, &str, fn() -> Check, Duration); 13] = [
        (
            1,
            "rational surface fibres",
            rational_survey,
            Duration::from_secs(1),
        ),
        (
            2,
            "K3 base change and NS",
            k3_base_change,
            Duration::from_secs(5),
        ),
        (
            3,
            "Inose fibration A=2 B=3",
            inose_fibration,
            Duration::from_secs(5),
        ),
        (4, "family at a=1", family_fibres, Duration::from_secs(5)),
        (5, "height 3 section", height_three, Duration::from_secs(10)),
        (
            6,
            "admissibility |d| <= 1000",
            admissibility_exhaustive,
            Duration::from_secs(30),
        ),
        (7, "exception list", exceptions, Duration::from_secs(300)),
        (
            8,
            "class number one",
            class_number_one,
            Duration::from_secs(60),
        ),
        (9, "certified j", j_certification, Duration::from_secs(10)),
        (
            10,
            "Inose coefficients (1,0,3)",
            inose_coefficients,
            Duration::from_secs(10),
        ),
        (11, "[H(4d):H(d)]", degrees, Duration::from_secs(1)),
        (
            12,
            "discriminant forms",
            discriminant_forms,
            Duration::from_secs(1),
        ),
        (13, "property checks", properties, Duration::from_secs(120)),
    ];
    let mut failed = Vec::new();
    for (n, name, check, limit) in criteria {
        let start = Instant::now();
        let res = check();
        let el = start.elapsed();
        let res = res.and_then(|()| {
            ensure(el <= limit, || {
                format!("took {:.2}s, limit {}s", el.as_secs_f64(), limit.as_secs())
            })
        });
        match res {
            Ok(()) => println!(
                "PASS {n:>2} {name} ({:.3}s / {}s)",
                el.as_secs_f64(),
                limit.as_secs()
            ),
            Err(e) => {
                println!(
                    "FAIL {n:>2} {name} ({:.3}s / {}s): {e}",
                    el.as_secs_f64(),
                    limit.as_secs()
                );
                failed.push(n);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all 13 criteria passed");
}
