//! The command surface: each command turns an instance into a report document.

use std::time::Instant;

use serde_json::{json, Value};

use jtk_core::jtransform::{
    chi1_differences, euler_bound, generated_in_degree_zero, j_function_direct, j_report, koszul_length_identity,
    saturation_intersection_identity, vanishing_consistent, JFiltration,
};
use jtk_core::koszul::{
    d_sequence_failure, is_amenable, is_d_plus, is_partial_sop, is_strong_d_sequence, koszul_report,
    proper_sequence_failure, ParameterSequence,
};
use jtk_core::localcohom::{lambda_gamma_bounds, les_consistency, standard_sop_check, LocalCohomology, Unmixedness};
use jtk_core::structure::{
    buchsbaum_series, dim_h_dichotomy, good_sop_failure, intersection_identity, regular_on_quotient, seq_cm_j_transform,
};
use jtk_core::{Error, Module, Ring};

use crate::dsl::{render, Instance};
use crate::report::{self, SCHEMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Koszul,
    JFunction,
    JCoeffs,
    LocalCohom,
    Structure,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Koszul => "koszul",
            Command::JFunction => "jfunction",
            Command::JCoeffs => "jcoeffs",
            Command::LocalCohom => "localcohom",
            Command::Structure => "structure",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub seq: Option<String>,
    pub max_degree: Option<u32>,
    pub exp_bound: Option<u32>,
    pub seed: Option<u64>,
}

/// A finished report; `diagnostics` non-empty means exit status 1.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub doc: Value,
    pub diagnostics: Vec<String>,
}

struct Ctx<'a> {
    ring: Ring,
    module_name: &'a str,
    m: &'a Module,
    s: &'a ParameterSequence,
    /// ψ is reported through this n.
    degree: usize,
    seed: u64,
    diagnostics: Vec<String>,
    certification: Vec<&'static str>,
}

impl Ctx<'_> {
    /// The value, or an `error` object with a diagnostic.
    fn attempt(&mut self, what: &str, f: impl FnOnce(&mut Self) -> jtk_core::Result<Value>) -> Value {
        match f(self) {
            Ok(v) => v,
            Err(e) => {
                self.diagnostics.push(format!("{what}: {e}"));
                json!({ "error": e.to_string() })
            }
        }
    }

    fn fail(&mut self, what: impl Into<String>) {
        self.diagnostics.push(what.into());
    }
}

pub fn run(cmd: Command, inst: &Instance, opts: &Options) -> Result<Outcome, String> {
    let start = Instant::now();
    let (module_name, m) = inst.default_module();
    let (seq_name, s) = inst.seq(opts.seq.as_deref())?;
    let mut ring = inst.ring.clone();
    if let Some(e) = opts.exp_bound {
        ring.caps.exp_bound = e;
    }
    let degree = match opts.max_degree {
        Some(n) => {
            ring.caps.psi_max = ring.caps.psi_max.max(n);
            n as usize
        }
        None => ring.caps.verify_cap as usize,
    };
    let seed = opts.seed.unwrap_or(inst.spec.seed);
    let mut cx = Ctx { ring, module_name, m, s, degree, seed, diagnostics: Vec::new(), certification: Vec::new() };
    let results = match cmd {
        Command::Koszul => koszul(&mut cx),
        Command::JFunction => {
            cx.attempt("jfunction", |c| Ok(report::route_a(&j_function_direct(&c.ring, c.m, c.s, c.degree)?)))
        }
        Command::JCoeffs => jcoeffs(&mut cx),
        Command::LocalCohom => localcohom(&mut cx, inst),
        Command::Structure => structure(&mut cx, inst),
        Command::Verify => verify(&mut cx),
    };
    let doc = json!({
        "schema": SCHEMA,
        "command": cmd.name(),
        "instance": {
            "ring": inst.spec.ring_name,
            "module": module_name,
            "seq": seq_name,
            "r": s.len(),
            "text": render(&inst.spec),
        },
        "seed": seed,
        "certification": cx.certification,
        "results": results,
        "diagnostics": cx.diagnostics,
        "timing_ms": start.elapsed().as_secs_f64() * 1e3,
    });
    Ok(Outcome { doc, diagnostics: cx.diagnostics })
}

fn koszul(cx: &mut Ctx) -> Value {
    let rep = cx.attempt("koszul homology", |c| Ok(report::koszul(&koszul_report(&c.ring, c.m, c.s)?)));
    let sop = cx.attempt("partial sop", |c| Ok(json!(is_partial_sop(&c.ring, c.m, c.s)?)));
    let amenable = if sop == json!(true) {
        cx.attempt("amenable", |c| Ok(json!(is_amenable(&c.ring, c.m, c.s)?)))
    } else {
        Value::Null
    };
    let dseq = cx.attempt("d-sequence", |c| {
        let w = d_sequence_failure(&c.ring, c.m, c.s)?;
        Ok(json!({ "holds": w.is_none(), "witness": w.map(|(i, j)| [i, j]) }))
    });
    let proper = cx.attempt("proper sequence", |c| {
        let w = proper_sequence_failure(&c.ring, c.m, c.s)?;
        Ok(json!({ "holds": w.is_none(), "witness": w.map(|(i, j, g)| [i, j, g]) }))
    });
    cx.certification.push("bounded");
    let strong = cx.attempt("strong d-sequence", |c| {
        Ok(report::bounded(&is_strong_d_sequence(&c.ring, c.m, c.s, c.ring.caps.exp_bound)?))
    });
    json!({
        "homology": rep,
        "partial_sop": sop,
        "amenable": amenable,
        "d_sequence": dseq,
        "proper_sequence": proper,
        "strong_d_sequence": strong,
    })
}

fn jcoeffs(cx: &mut Ctx) -> Value {
    cx.attempt("jcoeffs", |c| {
        let rep = j_report(&c.ring, c.m, c.s, c.degree)?;
        if !rep.routes_agree {
            c.fail("routes disagree");
        }
        Ok(json!({
            "j": rep.route_a.j,
            "series": report::series(&rep.route_a.series),
            "dimH": rep.route_a.dim_h,
            "route_a": report::route_a(&rep.route_a),
            "route_b": rep.route_b.as_ref().map(report::route_b),
            "route_c": rep.route_c.as_ref().map(report::route_c),
            "skipped": rep.skipped,
            "routes_agree": rep.routes_agree,
            "regular": rep.regular,
        }))
    })
}

fn localcohom(cx: &mut Ctx, inst: &Instance) -> Value {
    let asserted = inst.asserted_unmixed(cx.module_name);
    cx.attempt("local cohomology", |c| {
        let lc = LocalCohomology::new(&c.ring, c.m)?;
        let rep = lc.report(&c.ring)?;
        let unmixed = match lc.unmixedness(&c.ring) {
            Unmixedness::Unmixed => json!({ "unmixed": true, "lower_dimensions": [] }),
            Unmixedness::Mixed { lower_dimensions } => {
                if asserted {
                    c.fail("module asserted unmixed has lower-dimensional associated primes");
                }
                json!({ "unmixed": false, "lower_dimensions": lower_dimensions })
            }
        };
        let r = c.s.len();
        let standard = if r as i32 == rep.dim && rep.flc {
            c.attempt("standard sop", |c| {
                let st = standard_sop_check(&c.ring, c.m, &lc, c.s)?;
                Ok(json!({
                    "colength": st.colength,
                    "e0": st.e0,
                    "sv_invariant": st.sv_invariant,
                    "standard": st.standard,
                }))
            })
        } else {
            Value::Null
        };
        let bounds = match lc.finite_values(&c.ring) {
            Some(h) if r > 0 && (r as i32) < rep.dim => {
                let (k, chi) = lambda_gamma_bounds(&h, r);
                json!({ "k": k, "chi1": chi })
            }
            _ => Value::Null,
        };
        Ok(json!({
            "report": report::local(&rep),
            "unmixedness": unmixed,
            "standard_sop": standard,
            "bounds": bounds,
        }))
    })
}

fn structure(cx: &mut Ctx, inst: &Instance) -> Value {
    let cap = cx.ring.caps.verify_cap as usize;
    let r = cx.s.len();
    let mut out = serde_json::Map::new();
    let lc = match LocalCohomology::new(&cx.ring, cx.m) {
        Ok(lc) => lc,
        Err(e) => {
            cx.fail(format!("local cohomology: {e}"));
            return json!({ "error": e.to_string() });
        }
    };
    let d = lc.dimension();
    let buchsbaum = cx.attempt("buchsbaum series", |c| {
        let Some(h) = lc.finite_values(&c.ring) else {
            return Ok(json!({ "skipped": "module does not have finite local cohomology" }));
        };
        if r == 0 || r as i32 >= d {
            return Ok(json!({ "skipped": "needs 0 < r < dim M" }));
        }
        if lc.is_quasi_buchsbaum(&c.ring)? != Some(true) {
            return Ok(json!({ "skipped": "module is not quasi-Buchsbaum" }));
        }
        c.certification.push("buchsbaum-assumed");
        let a = j_function_direct(&c.ring, c.m, c.s, c.degree)?;
        let expected = buchsbaum_series(&h, r);
        let series_ok = a.series == expected;
        let dichotomy = match dim_h_dichotomy(&a, &h, r) {
            Ok(b) => json!(b),
            Err(Error::NotApplicable(why)) => json!({ "skipped": why }),
            Err(e) => return Err(e),
        };
        Ok(json!({
            "h": h,
            "series": report::series(&a.series),
            "expected": report::series(&expected),
            "series_matches": series_ok,
            "dimH": a.dim_h,
            "dimension_dichotomy": dichotomy,
        }))
    });
    out.insert("buchsbaum".into(), buchsbaum);

    let identities = cx.attempt("intersection identities", |c| {
        let dplus = is_d_plus(&c.ring, c.m, c.s, c.ring.caps.exp_bound)?;
        c.certification.push("bounded");
        if !dplus.holds {
            return Ok(json!({ "d_plus": report::bounded(&dplus), "skipped": "not a d⁺-sequence" }));
        }
        let mut filt = JFiltration::new(c.m);
        let mut per_prefix = Vec::new();
        for i in 1..=r {
            per_prefix.push(intersection_identity(&c.ring, c.m, c.s, i, &mut filt, cap)?);
        }
        let regular = regular_on_quotient(&c.ring, c.m, c.s, &mut filt, cap)?;
        if per_prefix.iter().any(|&b| !b) || !regular {
            c.fail("intersection identities fail");
        }
        Ok(json!({
            "d_plus": report::bounded(&dplus),
            "checked_through": cap,
            "prefix_intersections": per_prefix,
            "regular_on_quotient": regular,
        }))
    });
    out.insert("intersections".into(), identities);

    let filtration = match inst.filtration(cx.module_name) {
        Err(e) => {
            cx.fail(format!("filtration: {e}"));
            json!({ "error": e })
        }
        Ok(None) => Value::Null,
        Ok(Some((name, filt))) => cx.attempt("filtration", |c| {
            let check = filt.verify(&c.ring, c.m, c.seed)?;
            if !check.valid() {
                c.fail(format!("filtration {name} is not a sequentially Cohen-Macaulay filtration"));
            }
            // a declared full sop extending s
            let full = inst.seqs.iter().map(|(_, q)| q).find(|q| q.len() as i32 == d && q.prefix(r) == *c.s).cloned();
            let Some(full) = full else {
                return Ok(json!({
                    "name": name,
                    "dims": check.dims,
                    "valid": check.valid(),
                    "cohen_macaulay": check.cm,
                    "skipped": "no declared system of parameters extends the sequence",
                }));
            };
            let failure = good_sop_failure(&c.ring, &filt, &full)?;
            let seq_cm = if check.valid() && failure.is_none() {
                let a = j_function_direct(&c.ring, c.m, c.s, cap)?;
                let sc = seq_cm_j_transform(&c.ring, c.m, &filt, &full, r, &a, cap)?;
                if !sc.holds() {
                    c.fail("sequentially Cohen-Macaulay description fails");
                }
                json!({
                    "q": sc.q_index,
                    "predicted_psi": sc.predicted,
                    "psi": a.psi,
                    "psi_matches": sc.psi_matches,
                    "dimension_matches": sc.dim_matches,
                    "intersections": sc.intersections,
                    "graded_pieces": sc.graded_pieces,
                })
            } else {
                Value::Null
            };
            Ok(json!({
                "name": name,
                "dims": check.dims,
                "valid": check.valid(),
                "cohen_macaulay": check.cm,
                "good_sop": failure.is_none(),
                "good_sop_witness": failure.map(|(i, j)| [i, j]),
                "sequentially_cm": seq_cm,
            }))
        }),
    };
    out.insert("filtration".into(), filtration);
    Value::Object(out)
}

/// pass / fail / skipped for one check.
fn check(cx: &mut Ctx, name: &str, f: impl FnOnce(&mut Ctx) -> jtk_core::Result<Option<bool>>) -> Value {
    match f(cx) {
        Ok(Some(true)) => json!({ "name": name, "status": "pass" }),
        Ok(Some(false)) => {
            cx.fail(format!("{name} failed"));
            json!({ "name": name, "status": "fail" })
        }
        Ok(None) => json!({ "name": name, "status": "skipped" }),
        Err(Error::NotApplicable(why)) => json!({ "name": name, "status": "skipped", "detail": why }),
        Err(e) => {
            cx.fail(format!("{name}: {e}"));
            json!({ "name": name, "status": "error", "detail": e.to_string() })
        }
    }
}

fn verify(cx: &mut Ctx) -> Value {
    let rep = match j_report(&cx.ring, cx.m, cx.s, cx.degree) {
        Ok(r) => r,
        Err(e) => {
            cx.fail(format!("j report: {e}"));
            return json!({ "error": e.to_string() });
        }
    };
    let r = cx.s.len();
    let cap = cx.ring.caps.verify_cap as usize;
    let dseq = rep.route_b.is_some();
    let mut checks = vec![check(cx, "routes_agree", |_| Ok(Some(rep.routes_agree)))];
    checks.push(check(cx, "koszul_length_identity", |c| {
        if !dseq {
            return Ok(None);
        }
        koszul_length_identity(&c.ring, c.m, c.s).map(Some)
    }));
    checks.push(check(cx, "alternating_signs", |_| {
        Ok(rep.route_c.as_ref().map(|c| c.j.iter().enumerate().all(|(i, &v)| if i % 2 == 0 { v >= 0 } else { v <= 0 })))
    }));
    checks.push(check(cx, "j1_nonpositive", |_| Ok((r >= 1).then(|| rep.route_a.j.get(1).is_none_or(|&v| v <= 0)))));
    checks.push(check(cx, "vanishing_iff_depth", |c| {
        if !dseq || !is_amenable(&c.ring, c.m, c.s)? {
            return Ok(None);
        }
        vanishing_consistent(&c.ring, c.m, c.s, &rep.route_a).map(Some)
    }));
    checks
        .push(check(cx, "regular_has_zero_j", |_| Ok(rep.regular.then(|| rep.route_a.j[1..].iter().all(|&v| v == 0)))));
    checks.push(check(cx, "chi1_differences", |c| {
        if !dseq {
            return Ok(None);
        }
        chi1_differences(&c.ring, c.m, c.s, &rep.route_a.j).map(Some)
    }));
    checks.push(check(cx, "euler_bound", |c| {
        if !dseq || r < 2 {
            return Ok(None);
        }
        euler_bound(&c.ring, c.m, c.s, rep.route_a.j[1]).map(|e| Some(e.holds))
    }));
    checks.push(check(cx, "generated_in_degree_zero", |c| {
        if !dseq {
            return Ok(None);
        }
        generated_in_degree_zero(&c.ring, c.m, c.s, &mut JFiltration::new(c.m), cap).map(Some)
    }));
    checks.push(check(cx, "saturation_intersection", |c| {
        if !dseq {
            return Ok(None);
        }
        saturation_intersection_identity(&c.ring, c.m, c.s, &mut JFiltration::new(c.m), cap).map(Some)
    }));
    checks.push(check(cx, "d_sequence_is_proper", |c| {
        if !is_partial_sop(&c.ring, c.m, c.s)? || d_sequence_failure(&c.ring, c.m, c.s)?.is_some() {
            return Ok(None);
        }
        Ok(Some(proper_sequence_failure(&c.ring, c.m, c.s)?.is_none()))
    }));
    checks.push(check(cx, "local_cohomology_les", |c| {
        let Some(x) = c.s.elems().first() else { return Ok(None) };
        les_consistency(&c.ring, c.m, x).map(|l| Some(l.holds))
    }));
    json!({
        "j": rep.route_a.j,
        "series": report::series(&rep.route_a.series),
        "dimH": rep.route_a.dim_h,
        "routes": {
            "a": rep.route_a.j,
            "b": rep.route_b.as_ref().map(|b| b.j.clone()),
            "c": rep.route_c.as_ref().map(|c| c.j.clone()),
        },
        "skipped_routes": rep.skipped,
        "checks": checks,
    })
}
