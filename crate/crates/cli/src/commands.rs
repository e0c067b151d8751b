use crate::args::{
    BqfCmd, Cli, EllsurfCmd, FixturesCmd, FormArgs, K3Cmd, LatticeCmd, Module, ScanKind,
};
use crate::{fixtures, Output};
use anyhow::{anyhow, Context, Result};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use sk3_core::bqf::{
    automorphism_group, class_group, class_number_one_scan, reduce, two_torsion_scan,
    BinaryQuadraticForm,
};
use sk3_core::ellsurf::parse::parse_rational;
use sk3_core::ellsurf::{
    analyze_section, fiber_survey, parse_ratfun, shioda_tate, FiberSurvey, ModelFile, SectionData,
    WeierstrassModel,
};
use sk3_core::k3enriques::{
    brauer_example, class_number_one_discriminants, enriques_report, exception_list,
    hilbert_class_poly, inose_pencil, EXCEPTION_CAVEAT,
};
use sk3_core::lattice::{
    build_lattice, discriminant_form, rank2_forms_by_disc_form, smith_invariants, EvenLattice,
    FiniteQuadraticForm,
};
use std::fs;
use std::path::Path;

pub(crate) fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.module {
        Module::Bqf(c) => bqf(c),
        Module::Lattice(c) => lattice(c),
        Module::Ellsurf(c) => ellsurf(c),
        Module::K3(c) => k3(c),
        Module::Fixtures(FixturesCmd::Run { dir, filter }) => {
            fixtures::run_dir(dir, filter.as_deref())
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Integer as a JSON number when it fits `i64`, else as a string.
fn big(n: &BigInt) -> Value {
    i64::try_from(n)
        .map(Value::from)
        .unwrap_or_else(|_| Value::from(n.to_string()))
}

fn form_of(f: &FormArgs) -> Result<BinaryQuadraticForm> {
    Ok(BinaryQuadraticForm::from_i64(f.a, f.b, f.c)?)
}

fn bqf(c: &BqfCmd) -> Result<Output> {
    match c {
        BqfCmd::Reduce(f) => {
            let q = form_of(f)?;
            let r = reduce(&q);
            let m: Vec<Vec<Value>> = r
                .transform
                .iter()
                .map(|row| row.iter().map(big).collect())
                .collect();
            let text = format!("{q} reduces to {}\ntransform {:?}\n", r.form, r.transform);
            Ok(Output::new(
                json!({"form": q, "reduced": r.form, "discriminant": big(&q.discriminant()), "transform": m}),
                text,
            ))
        }
        BqfCmd::Classgroup { d } => {
            let cg = class_group(&BigInt::from(*d))?;
            let mut text = format!(
                "h({d}) = {}, structure {:?}, principal {}\n",
                cg.elements.len(),
                cg.structure,
                cg.principal
            );
            for f in &cg.elements {
                text.push_str(&format!("  {f}\n"));
            }
            let mut v = to_value(&cg);
            v["class_number"] = json!(cg.elements.len());
            Ok(Output::new(v, text))
        }
        BqfCmd::Aut(f) => {
            let q = form_of(f)?;
            let r = reduce(&q).form;
            let g = automorphism_group(&r)?;
            let text = format!("Aut{r}: order {}, {:?}\n", g.order, g.name);
            let mut v = to_value(&g);
            v["form"] = to_value(&q);
            v["reduced"] = to_value(&r);
            Ok(Output::new(v, text))
        }
        BqfCmd::Scan { bound, kind } => {
            let ds = match kind {
                ScanKind::TwoTorsion => two_torsion_scan(*bound),
                ScanKind::ClassNumberOne => class_number_one_scan(*bound),
            };
            let even = ds.iter().filter(|d| *d % 2 == 0).count();
            let name = match kind {
                ScanKind::TwoTorsion => "two-torsion",
                ScanKind::ClassNumberOne => "class-number-one",
            };
            let text = format!(
                "{} {name} discriminants with |d| <= {bound} ({even} even)\n{ds:?}\n",
                ds.len()
            );
            Ok(Output::new(
                json!({"kind": name, "bound": bound, "count": ds.len(), "even_count": even, "discriminants": ds}),
                text,
            ))
        }
    }
}

fn load_lattice(expr: &str) -> Result<EvenLattice> {
    if Path::new(expr).is_file() {
        let s = fs::read_to_string(expr).with_context(|| format!("reading {expr}"))?;
        let rows: Vec<Vec<i64>> =
            serde_json::from_str(&s).with_context(|| format!("{expr}: expected a Gram matrix"))?;
        return Ok(EvenLattice::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )?);
    }
    Ok(build_lattice(expr)?)
}

fn load_target(expr: &str) -> Result<FiniteQuadraticForm> {
    if Path::new(expr).is_file() {
        let s = fs::read_to_string(expr).with_context(|| format!("reading {expr}"))?;
        let v: Value = serde_json::from_str(&s)?;
        // a full discform report, a bare finite quadratic form, or a Gram matrix
        let inner = v.pointer("/result/discriminant_form").cloned().unwrap_or(v);
        if let Ok(f) = serde_json::from_value::<FiniteQuadraticForm>(inner.clone()) {
            return Ok(f);
        }
    }
    Ok(discriminant_form(&load_lattice(expr)?)?)
}

/// Nonzero `q` values with multiplicities, listed for groups of order at most this.
const LIST_Q_VALUES: u64 = 1024;

fn lattice(c: &LatticeCmd) -> Result<Output> {
    match c {
        LatticeCmd::Discform { lattice } => {
            let l = load_lattice(lattice)?;
            let f = discriminant_form(&l)?;
            let smith: Vec<Value> = smith_invariants(&l.gram)?.iter().map(big).collect();
            let mut v = json!({
                "rank": l.rank(),
                "det": big(&l.det()),
                "signature": l.signature(),
                "smith_invariants": smith,
                "order": f.order(),
                "discriminant_form": f,
            });
            let mut text = format!(
                "rank {}, det {}, signature {:?}, group {:?}\nq on generators: {}\n",
                l.rank(),
                l.det(),
                l.signature(),
                f.invariant_factors,
                f.q_gens
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            if f.order() <= LIST_Q_VALUES {
                let vals: Vec<String> = f
                    .nonzero_q_multiset()
                    .iter()
                    .map(|x| x.to_string())
                    .collect();
                text.push_str(&format!("q on nonzero elements: {}\n", vals.join(" ")));
                v["nonzero_q_values"] = json!(vals);
            }
            Ok(Output::new(v, text))
        }
        LatticeCmd::TFromNs { disc, target, sign } => {
            if *sign != 1 && *sign != -1 {
                return Err(
                    crate::UsageError(format!("--sign must be 1 or -1, got {sign}")).into(),
                );
            }
            let f = load_target(target)?;
            let forms = rank2_forms_by_disc_form(&BigInt::from(*disc), &f, *sign)?;
            let mut text = format!("{} form(s) of discriminant {disc}\n", forms.len());
            for q in &forms {
                text.push_str(&format!("  {q}\n"));
            }
            Ok(Output::new(
                json!({"disc": disc, "sign": sign, "forms": forms}),
                text,
            ))
        }
    }
}

fn load_model(path: &Path) -> Result<WeierstrassModel> {
    let s = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let f: ModelFile =
        serde_json::from_str(&s).with_context(|| format!("parsing {}", path.display()))?;
    Ok(WeierstrassModel::from_file(&f)?)
}

fn write_model(w: &WeierstrassModel, path: &Path) -> Result<()> {
    let s = serde_json::to_string_pretty(&w.to_file())? + "\n";
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

fn survey_value(s: &FiberSurvey) -> (Value, String) {
    let mut summary: Vec<String> = s
        .fibers
        .iter()
        .map(|e| format!("{}@{}", e.fiber.kind, e.place))
        .collect();
    if s.residual_i1 > 0 {
        summary.push(format!("{}xI1@residual", s.residual_i1));
    }
    let counts: Vec<(String, usize)> = s
        .type_counts()
        .into_iter()
        .map(|(k, n)| (k.to_string(), n))
        .collect();
    let mut v = to_value(s);
    v["summary"] = json!(summary);
    v["type_counts"] = json!(counts);
    let text = format!(
        "fibres: {}\ntypes: {}\neuler sum {} (chi = {})\n",
        summary.join(", "),
        counts
            .iter()
            .map(|(k, n)| format!("{n}x{k}"))
            .collect::<Vec<_>>()
            .join(" + "),
        s.euler_sum,
        s.chi
    );
    (v, text)
}

fn ellsurf(c: &EllsurfCmd) -> Result<Output> {
    match c {
        EllsurfCmd::Fibers {
            file,
            rank,
            torsion,
            mwl_disc,
        } => {
            let w = load_model(file)?;
            let s = fiber_survey(&w)?;
            let (mut v, mut text) = survey_value(&s);
            v["identity_holds"] = json!(w.invariants().identity_holds());
            if rank.is_some() || torsion.is_some() {
                let disc = parse_rational(mwl_disc).map_err(|e| anyhow!("--mwl-disc: {e}"))?;
                let st = shioda_tate(
                    &s.all_fibers(),
                    rank.unwrap_or(0),
                    torsion.unwrap_or(1),
                    &disc,
                )?;
                text.push_str(&format!("rho = {}, disc NS = {}\n", st.rho, st.ns_disc));
                v["shioda_tate"] = to_value(&st);
            }
            Ok(Output::new(v, text))
        }
        EllsurfCmd::Basechange { file, subst, out } => {
            let w = load_model(file)?;
            let phi = parse_ratfun(subst).map_err(|e| anyhow!("--subst: {e}"))?;
            let b = w.base_change(&phi)?;
            finish_model(b, out.as_deref(), format!("pulled back along t = {subst}"))
        }
        EllsurfCmd::Twist { file, gamma, out } => {
            let w = load_model(file)?;
            let g = parse_ratfun(gamma)
                .map_err(|e| anyhow!("--gamma: {e}"))?
                .as_poly()
                .ok_or_else(|| anyhow!("--gamma must be a polynomial in t"))?;
            let short = !w.is_short();
            let b = w.short_form().quadratic_twist(&g)?;
            let out = finish_model(b, out.as_deref(), format!("twisted by {gamma}"))?;
            Ok(if short {
                out.note("input converted to short form before twisting")
            } else {
                out
            })
        }
        EllsurfCmd::Height { file, x, y } => {
            let w = load_model(file)?;
            let x = parse_ratfun(x).map_err(|e| anyhow!("--x: {e}"))?;
            let y = parse_ratfun(y).map_err(|e| anyhow!("--y: {e}"))?;
            let a = analyze_section(&w, &SectionData::Point { x, y })?;
            let mut text = format!("height {} (chi {}, P.O = {:?})\n", a.height, a.chi, a.po);
            for r in &a.places {
                text.push_str(&format!(
                    "  {}@{}: component {}, contact {}, contribution {}\n",
                    r.fiber.kind, r.place, r.component, r.contact, r.contribution
                ));
            }
            Ok(Output::new(to_value(&a), text))
        }
    }
}

fn finish_model(w: WeierstrassModel, out: Option<&Path>, what: String) -> Result<Output> {
    let s = fiber_survey(&w)?;
    let (sv, stext) = survey_value(&s);
    if let Some(p) = out {
        write_model(&w, p)?;
    }
    let v = json!({
        "model": w.to_file(),
        "identity_holds": w.invariants().identity_holds(),
        "survey": sv,
    });
    let mut text = format!("{what}\n{}", stext);
    if let Some(p) = out {
        text.push_str(&format!("model written to {}\n", p.display()));
    }
    Ok(Output::new(v, text))
}

fn k3(c: &K3Cmd) -> Result<Output> {
    match c {
        K3Cmd::Report { form, bits } => {
            let q = form_of(form)?;
            let r = enriques_report(&q, *bits)?;
            let mut text = format!(
                "X_Q for Q = {}, d = {}\nKummer: {}\nEnriques involution: {} ({})\nbase change involution: {} ({})\n",
                r.form,
                r.d,
                r.is_kummer,
                r.enriques_admissible,
                r.admissibility_reason,
                r.base_change_involution,
                r.base_change_mechanism
            );
            if let Some(i) = &r.inose {
                text.push_str(&format!(
                    "Inose pencil: MW rank {}, extra fibres {}\n",
                    i.mw_rank, i.extra_fibers
                ));
            }
            text.push_str(&format!(
                "h(d) = {}, [H(4d):H(d)] = {}, genus size {}\nNS(X) over {}; NS(Y) over {} (conjectural)\n",
                r.fields.class_number,
                r.fields.deg_h4d_over_hd,
                r.fields.genus_size,
                r.ns_over.field,
                r.enriques_ns_over.field
            ));
            let mut out = Output::new(to_value(&r), text);
            if r.exception_flag {
                out = out.note(EXCEPTION_CAVEAT);
            }
            Ok(out)
        }
        K3Cmd::Inose {
            form,
            emit_model,
            bits,
        } => {
            let q = form_of(form)?;
            let x = inose_pencil(&q, *bits)?;
            let mut text = format!(
                "A^3 = {}, B^2 = {}\nMW rank {}, extra fibres {}\n",
                x.a_cubed
                    .exact
                    .as_ref()
                    .map(|r| r.to_string())
                    .unwrap_or_else(|| format!("{} + {} i", x.a_cubed.re, x.a_cubed.im)),
                x.b_squared
                    .exact
                    .as_ref()
                    .map(|r| r.to_string())
                    .unwrap_or_else(|| format!("{} + {} i", x.b_squared.re, x.b_squared.im)),
                x.mw_rank,
                x.extra_fibers
            );
            let mut v = to_value(&x);
            if let Some(p) = emit_model {
                let w = x.model.as_ref().ok_or_else(|| {
                    anyhow!(
                        "A^3 and B^2 are not rational for {}: no model over Q",
                        x.form
                    )
                })?;
                write_model(w, p)?;
                v["model"] = to_value(&w.to_file());
                text.push_str(&format!("model written to {}\n", p.display()));
            }
            Ok(Output::new(v, text))
        }
        K3Cmd::Exceptions => {
            let e = exception_list();
            let mut text = format!("{} exceptional forms\n", e.len());
            for q in &e {
                text.push_str(&format!("  {q}  d = {}\n", q.discriminant()));
            }
            Ok(Output::new(
                json!({"count": e.len(), "forms": e, "caveat": EXCEPTION_CAVEAT}),
                text,
            )
            .note(EXCEPTION_CAVEAT))
        }
        K3Cmd::Classpoly { d, bits } => {
            let p = hilbert_class_poly(&BigInt::from(*d), *bits)?;
            let coeffs: Vec<Value> = p.iter().map(big).collect();
            let text = format!(
                "H_{d}(X), degree {}, coefficients from X^0: {}\n",
                p.len() - 1,
                p.iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            Ok(Output::new(
                json!({"d": d, "degree": p.len() - 1, "coefficients": coeffs, "precision_bits": bits}),
                text,
            ))
        }
        K3Cmd::ClassOne => {
            let ds = class_number_one_discriminants()?;
            let text = format!("{} discriminants: {ds:?}\n", ds.len());
            Ok(Output::new(
                json!({"count": ds.len(), "discriminants": ds}),
                text,
            ))
        }
        K3Cmd::Brauer { m, n } => {
            let b = brauer_example(*m, *n)?;
            let text = format!("NS = {}, rank {}, d = {}\n", b.ns_expression, b.rank, b.d);
            Ok(Output::new(to_value(&b), text))
        }
    }
}
