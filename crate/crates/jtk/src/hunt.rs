//! Random search for instances satisfying every hypothesis of the regularity
//! conjecture while failing its conclusion.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use jtk_core::jtransform::{conjecture_probe, ProbeRecord, Verdict};
use jtk_core::{Caps, Field, Monomial, OrderTag, Poly, PolyCtx};

use crate::dsl::{render, Instance, InstanceSpec, Matrix, ModuleDecl, ModuleKind, SeqDecl};
use crate::report;

const NVARS: usize = 4;
const P: u64 = 32003;

/// Tighter than the defaults so a bad draw fails fast instead of stalling.
fn hunt_caps() -> Caps {
    Caps { max_degree: 24, exp_bound: 2, retries: 10, verify_cap: 6, psi_max: 16 }
}

fn ctx() -> PolyCtx {
    PolyCtx::new(Field::new(P).unwrap(), OrderTag::Degrevlex, NVARS).unwrap()
}

fn random_monomial(rng: &mut ChaCha8Rng, deg: u32) -> Monomial {
    let mut e = [0u32; NVARS];
    for _ in 0..deg {
        e[rng.random_range(0..NVARS)] += 1;
    }
    Monomial::from_exps(&e)
}

/// A form with one to three terms.
fn sparse_form(rng: &mut ChaCha8Rng, deg: u32, ctx: &PolyCtx) -> Poly {
    let terms =
        (0..rng.random_range(1..=3)).map(|_| (random_monomial(rng, deg), rng.random_range(1..P as u32))).collect();
    Poly::from_terms(terms, ctx)
}

/// The instance drawn for `index` under `seed`.
pub fn instance(seed: u64, index: u64) -> InstanceSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let ctx = ctx();
    let vars: Vec<String> = (1..=NVARS).map(|i| format!("x{i}")).collect();
    let relations: Vec<Poly> = (0..rng.random_range(2..=4))
        .map(|_| {
            let deg = rng.random_range(2..=3);
            sparse_form(&mut rng, deg, &ctx)
        })
        .filter(|f| !f.is_zero())
        .collect();
    let mut modules = Vec::new();
    if rng.random_bool(0.5) {
        let rows = rng.random_range(1..=2);
        let cols = rng.random_range(1..=3);
        let shifts = vec![0; rows];
        let degs: Vec<u32> = (0..cols).map(|_| rng.random_range(1..=2)).collect();
        let m: Vec<Vec<Poly>> = (0..rows)
            .map(|_| {
                degs.iter()
                    .map(|&d| if rng.random_bool(0.3) { Poly::zero() } else { sparse_form(&mut rng, d, &ctx) })
                    .collect()
            })
            .collect();
        modules.push(ModuleDecl { name: String::from("M"), kind: ModuleKind::Coker(Matrix { rows: m, shifts }) });
    }
    // r ≤ dim M so that the sequence can be a partial sop at all
    let dim = module_dimension(&vars, &relations, &modules).clamp(1, 3) as usize;
    let r = rng.random_range(1..=dim);
    let elems = (0..r)
        .map(|_| {
            // mostly sparse linear forms, sometimes generic ones
            let mut f = Poly::zero();
            let k = if rng.random_bool(0.5) { NVARS } else { rng.random_range(1..=2) };
            for _ in 0..k {
                let v = Poly::var(rng.random_range(0..NVARS)).scale(rng.random_range(1..P as u32), &ctx);
                f = f.add(&v, &ctx);
            }
            f
        })
        .filter(|f| !f.is_zero())
        .collect();
    InstanceSpec {
        ring_name: String::from("R"),
        characteristic: P,
        vars,
        relations,
        modules,
        seqs: vec![SeqDecl { name: String::from("s"), elems }],
        filtrations: Vec::new(),
        unmixed: Vec::new(),
        caps: hunt_caps(),
        seed,
    }
}

fn module_dimension(vars: &[String], relations: &[Poly], modules: &[ModuleDecl]) -> i32 {
    let spec = InstanceSpec {
        ring_name: String::from("R"),
        characteristic: P,
        vars: vars.to_vec(),
        relations: relations.to_vec(),
        modules: modules.to_vec(),
        seqs: Vec::new(),
        filtrations: Vec::new(),
        unmixed: Vec::new(),
        caps: hunt_caps(),
        seed: 0,
    };
    match Instance::build(spec) {
        Ok(inst) => {
            let (_, m) = inst.default_module();
            m.dimension(&inst.ring)
        }
        Err(_) => 1,
    }
}

/// Probes one instance; `None` if it fails to build.
pub fn probe(spec: &InstanceSpec) -> Option<ProbeRecord> {
    let inst = Instance::build(spec.clone()).ok()?;
    let (_, m) = inst.default_module();
    let (_, s) = inst.seq(None).ok()?;
    Some(conjecture_probe(&inst.ring, m, s, false))
}

/// Passes the amenable d-sequence filter.
pub fn is_candidate(p: &ProbeRecord) -> bool {
    p.amenable == Some(true) && p.d_sequence == Some(true)
}

pub fn record(seed: u64, index: u64, spec: &InstanceSpec, p: &ProbeRecord) -> Value {
    json!({
        "seed": seed,
        "index": index,
        "instance": render(spec),
        "probe": report::probe(p),
    })
}

#[derive(Clone, Debug, Default)]
pub struct Summary {
    pub instances: u64,
    pub unbuilt: u64,
    pub supporting: u64,
    pub not_applicable: u64,
    pub counterexample_candidates: u64,
    /// Why instances were not applicable.
    pub reasons: BTreeMap<String, u64>,
    /// JSON lines, in index order, for instances passing the filter.
    pub lines: Vec<String>,
}

impl Summary {
    pub fn to_json(&self) -> Value {
        json!({
            "instances": self.instances,
            "unbuilt": self.unbuilt,
            "records": self.lines.len(),
            "SUPPORTING": self.supporting,
            "NOT_APPLICABLE": self.not_applicable,
            "COUNTEREXAMPLE-CANDIDATE": self.counterexample_candidates,
            "not_applicable_reasons": self.reasons,
        })
    }
}

/// Runs `count` instances on the current rayon pool. Output order does not
/// depend on scheduling.
pub fn hunt(seed: u64, count: u64) -> Summary {
    let results: Vec<(u64, InstanceSpec, Option<ProbeRecord>)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let spec = instance(seed, i);
            let p = probe(&spec);
            (i, spec, p)
        })
        .collect();
    let mut sum = Summary { instances: count, ..Summary::default() };
    for (i, spec, p) in results {
        let Some(p) = p else {
            sum.unbuilt += 1;
            continue;
        };
        match p.verdict {
            Verdict::Supporting => sum.supporting += 1,
            Verdict::NotApplicable => {
                sum.not_applicable += 1;
                *sum.reasons.entry(p.note.clone().unwrap_or_default()).or_default() += 1;
            }
            Verdict::CounterexampleCandidate => sum.counterexample_candidates += 1,
        }
        if is_candidate(&p) {
            sum.lines.push(record(seed, i, &spec, &p).to_string());
        }
    }
    sum
}
