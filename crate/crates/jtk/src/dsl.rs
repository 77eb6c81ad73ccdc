//! The instance language.
//!
//! ```text
//! ring R = GF(32003)[x,y,z] / (x^2*z, x*y^2);
//! module M = coker [[x, y]] shifts (0);
//! seq s = (z);
//! filtration D of M = [[x]];
//! assert unmixed M;
//! set psi_max = 20;
//! ```

use std::fmt;

use jtk_core::expr::parse_poly_prefix;
use jtk_core::field::is_prime;
use jtk_core::koszul::ParameterSequence;
use jtk_core::structure::DimensionFiltration;
use jtk_core::{Caps, Field, FreeVector, Module, OrderTag, Poly, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// Entries listed row by row; the columns are the generators (for `image`)
/// or relations (for `coker`) in ⊕ S(−shifts[i]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: Vec<Vec<Poly>>,
    pub shifts: Vec<i32>,
}

impl Matrix {
    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn columns(&self, field: Field) -> Vec<FreeVector> {
        (0..self.ncols())
            .map(|j| {
                let comps: Vec<Poly> = self.rows.iter().map(|r| r[j].clone()).collect();
                FreeVector::from_components(&comps, &self.shifts, OrderTag::Degrevlex, field)
            })
            .filter(|v| !v.is_zero())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    Ring,
    Coker(Matrix),
    Image(Matrix),
    Ideal(Vec<Poly>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: String,
    pub kind: ModuleKind,
}

impl ModuleDecl {
    pub fn shifts(&self) -> Vec<i32> {
        match &self.kind {
            ModuleKind::Ring | ModuleKind::Ideal(_) => vec![0],
            ModuleKind::Coker(m) | ModuleKind::Image(m) => m.shifts.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqDecl {
    pub name: String,
    pub elems: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationDecl {
    pub name: String,
    pub module: String,
    /// Generators of D₁..D_{ℓ−1}; D₀ = 0 and D_ℓ = M are implicit.
    pub stages: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub ring_name: String,
    pub characteristic: u64,
    pub vars: Vec<String>,
    pub relations: Vec<Poly>,
    pub modules: Vec<ModuleDecl>,
    pub seqs: Vec<SeqDecl>,
    pub filtrations: Vec<FiltrationDecl>,
    /// Modules the user asserts to be unmixed.
    pub unmixed: Vec<String>,
    pub caps: Caps,
    pub seed: u64,
}

const CAP_KEYS: [&str; 6] = ["max_degree", "exp_bound", "retries", "verify_cap", "psi_max", "seed"];

struct Parser {
    src: String,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn new(text: &str) -> Self {
        // comments become spaces; positions below refer to this text
        let mut src = String::with_capacity(text.len());
        for line in text.split_inclusive('\n') {
            match line.find("//") {
                Some(k) => {
                    src.push_str(&line[..k]);
                    src.extend(line[k..].chars().map(|c| if c == '\n' { '\n' } else { ' ' }));
                }
                None => src.push_str(line),
            }
        }
        Parser { src, pos: 0 }
    }

    fn diag_at(&self, pos: usize, message: impl Into<String>) -> Diagnostic {
        let upto = &self.src[..pos.min(self.src.len())];
        let line = upto.matches('\n').count() + 1;
        let col = upto.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Diagnostic { line, col, message: message.into() }
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(self.diag_at(self.pos, message))
    }

    fn ws(&mut self) {
        let b = self.src.as_bytes();
        while self.pos < b.len() && (b[self.pos] as char).is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.src[self.pos..].chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(f) => self.err(format!("expected '{c}', found '{f}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn ident(&mut self) -> PResult<String> {
        self.ws();
        let rest = &self.src[self.pos..];
        let n = rest.bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
        if n == 0 || rest.as_bytes()[0].is_ascii_digit() {
            return self.err("expected an identifier");
        }
        let s = rest[..n].to_string();
        self.pos += n;
        Ok(s)
    }

    fn peek_ident(&mut self) -> Option<String> {
        let save = self.pos;
        let r = self.ident().ok();
        self.pos = save;
        r
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        let at = {
            self.ws();
            self.pos
        };
        match self.ident() {
            Ok(s) if s == kw => Ok(()),
            _ => {
                self.pos = at;
                self.err(format!("expected '{kw}'"))
            }
        }
    }

    fn integer(&mut self) -> PResult<i64> {
        self.ws();
        let start = self.pos;
        let neg = self.eat('-');
        self.ws();
        let rest = &self.src[self.pos..];
        let n = rest.bytes().take_while(|b| b.is_ascii_digit()).count();
        if n == 0 {
            self.pos = start;
            return self.err("expected an integer");
        }
        let v: i64 = match rest[..n].parse() {
            Ok(v) => v,
            Err(_) => {
                self.pos = start;
                return self.err("integer out of range");
            }
        };
        self.pos += n;
        Ok(if neg { -v } else { v })
    }

    fn poly(&mut self, ring: &Ring) -> PResult<(Poly, usize)> {
        self.ws();
        let start = self.pos;
        match parse_poly_prefix(ring, &self.src[start..]) {
            Ok((p, used)) => {
                self.pos = start + used;
                Ok((p, start))
            }
            Err(e) => Err(self.diag_at(start + e.offset, e.message)),
        }
    }

    fn homogeneous_poly(&mut self, ring: &Ring) -> PResult<Poly> {
        let (p, at) = self.poly(ring)?;
        if !p.is_homogeneous() {
            return Err(self.diag_at(at, format!("inhomogeneous element '{}'", ring.fmt_poly(&p))));
        }
        Ok(p)
    }

    /// `( p, p, ... )`, possibly empty.
    fn poly_list(&mut self, ring: &Ring) -> PResult<Vec<Poly>> {
        self.expect('(')?;
        let mut out = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            out.push(self.homogeneous_poly(ring)?);
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn int_list(&mut self) -> PResult<Vec<i32>> {
        self.expect('(')?;
        let mut out = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            let v = self.integer()?;
            out.push(i32::try_from(v).map_err(|_| self.diag_at(self.pos, "shift out of range"))?);
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    /// `[[a, b], [c, d]]` followed by an optional `shifts (..)`.
    fn matrix(&mut self, ring: &Ring, default_shifts: Option<&[i32]>) -> PResult<Matrix> {
        self.ws();
        let at = self.pos;
        self.expect('[')?;
        let mut rows: Vec<Vec<Poly>> = Vec::new();
        let mut starts: Vec<Vec<usize>> = Vec::new();
        loop {
            self.expect('[')?;
            let mut row = Vec::new();
            let mut st = Vec::new();
            if !self.eat(']') {
                loop {
                    let (p, s) = self.poly(ring)?;
                    if !p.is_homogeneous() {
                        return Err(self.diag_at(s, format!("inhomogeneous element '{}'", ring.fmt_poly(&p))));
                    }
                    row.push(p);
                    st.push(s);
                    if self.eat(']') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(self.diag_at(at, "matrix rows have different lengths"));
                }
            }
            rows.push(row);
            starts.push(st);
            if self.eat(']') {
                break;
            }
            self.expect(',')?;
        }
        let shifts = if self.peek_ident().as_deref() == Some("shifts") {
            self.ident()?;
            let sh = self.int_list()?;
            if sh.len() != rows.len() {
                return self.err(format!("{} shifts for {} rows", sh.len(), rows.len()));
            }
            if default_shifts.is_some_and(|d| d != sh.as_slice()) {
                return self.err("shifts must match the module");
            }
            sh
        } else {
            match default_shifts {
                Some(s) if s.len() == rows.len() => s.to_vec(),
                Some(s) => return Err(self.diag_at(at, format!("expected {} rows, found {}", s.len(), rows.len()))),
                None => vec![0; rows.len()],
            }
        };
        let ncols = rows[0].len();
        for j in 0..ncols {
            let mut deg: Option<i32> = None;
            for (i, row) in rows.iter().enumerate() {
                if let Some(d) = row[j].degree() {
                    let d = d as i32 + shifts[i];
                    match deg {
                        None => deg = Some(d),
                        Some(e) if e != d => {
                            return Err(self
                                .diag_at(starts[i][j], format!("inhomogeneous column {}: degrees {e} and {d}", j + 1)))
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(Matrix { rows, shifts })
    }

    fn statement_end(&mut self) -> PResult<()> {
        self.expect(';')
    }
}

fn is_taken(spec: &InstanceSpec, name: &str) -> bool {
    spec.ring_name == name
        || spec.vars.iter().any(|v| v == name)
        || spec.modules.iter().any(|m| m.name == name)
        || spec.seqs.iter().any(|s| s.name == name)
        || spec.filtrations.iter().any(|f| f.name == name)
}

/// Parses an instance file. Never panics; every failure is a diagnostic.
pub fn parse(text: &str) -> Result<InstanceSpec, Diagnostic> {
    let mut p = Parser::new(text);
    if p.at_end() {
        return p.err("expected ring declaration");
    }
    if p.peek_ident().as_deref() != Some("ring") {
        return p.err("expected ring declaration");
    }
    let (mut spec, ring) = parse_ring(&mut p)?;
    while !p.at_end() {
        let start = p.pos;
        let kw = p.ident()?;
        match kw.as_str() {
            "ring" => {
                p.pos = start;
                return p.err("only one ring declaration is allowed");
            }
            "module" => {
                let name = fresh_name(&mut p, &spec)?;
                p.expect('=')?;
                let kind = match p.ident()?.as_str() {
                    n if n == spec.ring_name => ModuleKind::Ring,
                    "coker" => ModuleKind::Coker(p.matrix(&ring, None)?),
                    "image" => ModuleKind::Image(p.matrix(&ring, None)?),
                    "ideal" => ModuleKind::Ideal(p.poly_list(&ring)?),
                    other => {
                        p.pos -= other.len();
                        return p.err(format!("unknown identifier '{other}'"));
                    }
                };
                p.statement_end()?;
                spec.modules.push(ModuleDecl { name, kind });
            }
            "seq" => {
                let name = fresh_name(&mut p, &spec)?;
                p.expect('=')?;
                let elems = p.poly_list(&ring)?;
                p.statement_end()?;
                spec.seqs.push(SeqDecl { name, elems });
            }
            "filtration" => {
                let name = fresh_name(&mut p, &spec)?;
                p.keyword("of")?;
                p.ws();
                let at = p.pos;
                let module = p.ident()?;
                let shifts = match lookup_module(&spec, &module) {
                    Some(s) => s,
                    None => return Err(p.diag_at(at, format!("unknown identifier '{module}'"))),
                };
                p.expect('=')?;
                let mut stages = vec![p.matrix(&ring, Some(&shifts))?];
                while p.eat('|') {
                    stages.push(p.matrix(&ring, Some(&shifts))?);
                }
                p.statement_end()?;
                spec.filtrations.push(FiltrationDecl { name, module, stages });
            }
            "assert" => {
                p.keyword("unmixed")?;
                p.ws();
                let at = p.pos;
                let module = p.ident()?;
                if lookup_module(&spec, &module).is_none() {
                    return Err(p.diag_at(at, format!("unknown identifier '{module}'")));
                }
                p.statement_end()?;
                if !spec.unmixed.contains(&module) {
                    spec.unmixed.push(module);
                }
            }
            "set" => {
                p.ws();
                let at = p.pos;
                let key = p.ident()?;
                p.expect('=')?;
                let v = p.integer()?;
                if v < 0 {
                    return p.err("expected a non-negative integer");
                }
                match key.as_str() {
                    "seed" => spec.seed = v as u64,
                    k if CAP_KEYS.contains(&k) => {
                        let v = u32::try_from(v).map_err(|_| p.diag_at(at, "value out of range"))?;
                        match k {
                            "max_degree" => spec.caps.max_degree = v,
                            "exp_bound" => spec.caps.exp_bound = v,
                            "retries" => spec.caps.retries = v,
                            "verify_cap" => spec.caps.verify_cap = v,
                            _ => spec.caps.psi_max = v,
                        }
                    }
                    _ => return Err(p.diag_at(at, format!("unknown setting '{key}'"))),
                }
                p.statement_end()?;
            }
            other => {
                p.pos = start;
                return p.err(format!("unknown statement '{other}'"));
            }
        }
    }
    Ok(spec)
}

fn fresh_name(p: &mut Parser, spec: &InstanceSpec) -> PResult<String> {
    p.ws();
    let at = p.pos;
    let name = p.ident()?;
    if is_taken(spec, &name) || matches!(name.as_str(), "coker" | "image" | "ideal" | "shifts" | "of") {
        return Err(p.diag_at(at, format!("name '{name}' is already in use")));
    }
    Ok(name)
}

fn lookup_module(spec: &InstanceSpec, name: &str) -> Option<Vec<i32>> {
    if name == spec.ring_name {
        return Some(vec![0]);
    }
    spec.modules.iter().find(|m| m.name == name).map(|m| m.shifts())
}

fn parse_ring(p: &mut Parser) -> PResult<(InstanceSpec, Ring)> {
    p.keyword("ring")?;
    let name = p.ident()?;
    p.expect('=')?;
    p.ws();
    let at = p.pos;
    if p.ident().ok().as_deref() != Some("GF") {
        return Err(p.diag_at(at, "expected 'GF(p)'"));
    }
    p.expect('(')?;
    p.ws();
    let at = p.pos;
    let ch = p.integer()?;
    if ch < 2 || !is_prime(ch as u64) {
        return Err(p.diag_at(at, format!("characteristic {ch} is not prime")));
    }
    if ch >= 1 << 31 {
        return Err(p.diag_at(at, format!("characteristic {ch} is too large")));
    }
    p.expect(')')?;
    p.expect('[')?;
    let mut vars: Vec<String> = Vec::new();
    if !p.eat(']') {
        loop {
            p.ws();
            let at = p.pos;
            let v = p.ident()?;
            if vars.contains(&v) || v == name {
                return Err(p.diag_at(at, format!("name '{v}' is already in use")));
            }
            vars.push(v);
            if p.eat(']') {
                break;
            }
            p.expect(',')?;
        }
    }
    let field = Field::new(ch as u64).map_err(|e| p.diag_at(at, e.to_string()))?;
    let ring = Ring::polynomial(field, vars.clone()).map_err(|e| p.diag_at(at, e.to_string()))?;
    let relations = if p.eat('/') { p.poly_list(&ring)? } else { Vec::new() };
    p.statement_end()?;
    let spec = InstanceSpec {
        ring_name: name,
        characteristic: ch as u64,
        vars,
        relations,
        modules: Vec::new(),
        seqs: Vec::new(),
        filtrations: Vec::new(),
        unmixed: Vec::new(),
        caps: Caps::default(),
        seed: 0,
    };
    Ok((spec, ring))
}

fn render_rows(ring: &Ring, m: &Matrix) -> String {
    let rows: Vec<String> = m
        .rows
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|p| ring.fmt_poly(p)).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn render_matrix(ring: &Ring, m: &Matrix) -> String {
    let mut s = render_rows(ring, m);
    if m.shifts.iter().any(|&x| x != 0) {
        let sh: Vec<String> = m.shifts.iter().map(|x| x.to_string()).collect();
        s.push_str(&format!(" shifts ({})", sh.join(", ")));
    }
    s
}

fn render_polys(ring: &Ring, ps: &[Poly]) -> String {
    format!("({})", ps.iter().map(|p| ring.fmt_poly(p)).collect::<Vec<_>>().join(", "))
}

/// Canonical text; `parse(&render(s)) == s`.
pub fn render(spec: &InstanceSpec) -> String {
    let field = Field::new(spec.characteristic).expect("spec holds a prime");
    let ring = Ring::polynomial(field, spec.vars.clone()).expect("spec holds valid variables");
    let mut out = format!("ring {} = GF({})[{}]", spec.ring_name, spec.characteristic, spec.vars.join(","));
    if !spec.relations.is_empty() {
        out.push_str(&format!(" / {}", render_polys(&ring, &spec.relations)));
    }
    out.push_str(";\n");
    for m in &spec.modules {
        let body = match &m.kind {
            ModuleKind::Ring => spec.ring_name.clone(),
            ModuleKind::Coker(x) => format!("coker {}", render_matrix(&ring, x)),
            ModuleKind::Image(x) => format!("image {}", render_matrix(&ring, x)),
            ModuleKind::Ideal(g) => format!("ideal {}", render_polys(&ring, g)),
        };
        out.push_str(&format!("module {} = {body};\n", m.name));
    }
    for s in &spec.seqs {
        out.push_str(&format!("seq {} = {};\n", s.name, render_polys(&ring, &s.elems)));
    }
    for f in &spec.filtrations {
        // stage shifts always come from the module
        let stages: Vec<String> = f.stages.iter().map(|m| render_rows(&ring, m)).collect();
        out.push_str(&format!("filtration {} of {} = {};\n", f.name, f.module, stages.join(" | ")));
    }
    for u in &spec.unmixed {
        out.push_str(&format!("assert unmixed {u};\n"));
    }
    let d = Caps::default();
    let c = spec.caps;
    for (k, v, dv) in [
        ("max_degree", c.max_degree, d.max_degree),
        ("exp_bound", c.exp_bound, d.exp_bound),
        ("retries", c.retries, d.retries),
        ("verify_cap", c.verify_cap, d.verify_cap),
        ("psi_max", c.psi_max, d.psi_max),
    ] {
        if v != dv {
            out.push_str(&format!("set {k} = {v};\n"));
        }
    }
    if spec.seed != 0 {
        out.push_str(&format!("set seed = {};\n", spec.seed));
    }
    out
}

/// A parsed instance with its algebraic objects built.
#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub ring: Ring,
    pub modules: Vec<(String, Module)>,
    pub seqs: Vec<(String, ParameterSequence)>,
}

impl Instance {
    pub fn build(spec: InstanceSpec) -> Result<Instance, String> {
        let field = Field::new(spec.characteristic).map_err(|e| e.to_string())?;
        let ring =
            Ring::quotient(field, spec.vars.clone(), spec.relations.clone(), spec.caps).map_err(|e| e.to_string())?;
        let mut modules = vec![(spec.ring_name.clone(), Module::ring_module(&ring).map_err(|e| e.to_string())?)];
        for m in &spec.modules {
            let built = match &m.kind {
                ModuleKind::Ring => Module::ring_module(&ring),
                ModuleKind::Coker(x) => Module::cokernel(&ring, &x.shifts, &x.columns(field)),
                ModuleKind::Image(x) => Module::submodule(&ring, &x.shifts, &x.columns(field)),
                ModuleKind::Ideal(g) => {
                    let x = Matrix { rows: vec![g.clone()], shifts: vec![0] };
                    Module::submodule(&ring, &[0], &x.columns(field))
                }
            }
            .map_err(|e| format!("module {}: {e}", m.name))?;
            modules.push((m.name.clone(), built));
        }
        let mut seqs = Vec::new();
        for s in &spec.seqs {
            let ps = ParameterSequence::new(&ring, s.elems.clone()).map_err(|e| format!("seq {}: {e}", s.name))?;
            seqs.push((s.name.clone(), ps));
        }
        Ok(Instance { spec, ring, modules, seqs })
    }

    /// The last declared module, or the ring itself.
    pub fn default_module(&self) -> (&str, &Module) {
        let (n, m) = self.modules.last().expect("ring module is always present");
        (n, m)
    }

    pub fn module(&self, name: &str) -> Option<&Module> {
        self.modules.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// The named sequence, or the first declared one.
    pub fn seq(&self, name: Option<&str>) -> Result<(&str, &ParameterSequence), String> {
        match name {
            Some(n) => self
                .seqs
                .iter()
                .find(|(m, _)| m == n)
                .map(|(m, s)| (m.as_str(), s))
                .ok_or_else(|| format!("unknown sequence '{n}'")),
            None => self.seqs.first().map(|(m, s)| (m.as_str(), s)).ok_or_else(|| String::from("no sequence declared")),
        }
    }

    pub fn asserted_unmixed(&self, module: &str) -> bool {
        self.spec.unmixed.iter().any(|u| u == module)
    }

    pub fn filtration(&self, module: &str) -> Result<Option<(String, DimensionFiltration)>, String> {
        let Some(decl) = self.spec.filtrations.iter().find(|f| f.module == module) else {
            return Ok(None);
        };
        let m = self.module(module).ok_or_else(|| format!("unknown module '{module}'"))?;
        let field = self.ring.field();
        let inner: Vec<Vec<FreeVector>> = decl
            .stages
            .iter()
            .map(|x| Matrix { rows: x.rows.clone(), shifts: m.shifts().to_vec() }.columns(field))
            .collect();
        let f = DimensionFiltration::new(&self.ring, m, &inner).map_err(|e| e.to_string())?;
        Ok(Some((decl.name.clone(), f)))
    }
}
