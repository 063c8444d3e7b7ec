//! The line-oriented input format and its canonical printer.
//!
//! ```text
//! ring { p = 101  vars = x y z w  weights = 1 1 1 1  f = x*y - z*w  domain = yes }
//! module I_xz { gens = 2  gendegs = 1 1
//!   rel = y, -w
//!   rel = z, -x }
//! module Mxz { quotient = x, z }
//! pair P1 { left = I_xz  right = Mxz }
//! ses S1 { sub = I_xz  mid = R1  quot = Mxz  inj = [x, z]  surj = [1] }
//! expect { op = theta  on = P1  value = -1  provenance = oracle }
//! ```
//!
//! A block is `kind [name] { key = value ... }`. Keys are identifiers
//! followed by `=`; a value runs until the next key or the closing brace,
//! so values may contain spaces and span lines. `#` starts a comment.
//! The free modules `R1`, `R2`, .. are predefined.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::fpmod::{FPModule, ModuleMap};
use crate::hypersurface::{Mode, RingContext};
use crate::matrix::PolyMatrix;
use crate::poly::{PolyRing, Polynomial, NVARS};
use crate::theta::ShortExact;

/// How a module was declared; printing this back reproduces the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleDecl {
    Presented {
        gen_degrees: Vec<i32>,
        relations: Vec<Vec<Polynomial>>,
    },
    Quotient(Vec<Polynomial>),
    Ideal(Vec<Polynomial>),
    Free(Vec<i32>),
    Hom(String, String),
    Dual(String),
    Sum(Vec<String>),
    Tensor(String, String),
    Syzygy(String, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleEntry {
    pub name: String,
    pub decl: ModuleDecl,
    pub mode: Mode,
    pub module: FPModule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairEntry {
    pub name: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug)]
pub struct SesEntry {
    pub name: String,
    pub sub: String,
    pub mid: String,
    pub quot: String,
    pub inj_degree: i32,
    pub surj_degree: i32,
    pub ses: ShortExact,
}

impl PartialEq for SesEntry {
    fn eq(&self, o: &Self) -> bool {
        (
            &self.name,
            &self.sub,
            &self.mid,
            &self.quot,
            self.inj_degree,
            self.surj_degree,
        ) == (&o.name, &o.sub, &o.mid, &o.quot, o.inj_degree, o.surj_degree)
            && self.ses.inj == o.ses.inj
            && self.ses.surj == o.ses.surj
    }
}

/// One expected invariant. `args` holds the optional keys (`index`,
/// `with`, `g`, `steps`); `value` is compared as normalized text.
#[derive(Clone, Debug)]
pub struct Expectation {
    pub op: String,
    pub on: String,
    pub value: String,
    pub provenance: String,
    pub args: BTreeMap<String, String>,
    /// Source line, for reports; not part of equality.
    pub line: usize,
}

impl PartialEq for Expectation {
    fn eq(&self, o: &Self) -> bool {
        (&self.op, &self.on, &self.value, &self.provenance, &self.args)
            == (&o.op, &o.on, &o.value, &o.provenance, &o.args)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub ctx: RingContext,
    pub modules: Vec<ModuleEntry>,
    pub pairs: Vec<PairEntry>,
    pub sequences: Vec<SesEntry>,
    pub expectations: Vec<Expectation>,
}

impl Document {
    /// A declared module or a built-in free module `R<n>`.
    pub fn module(&self, name: &str) -> Result<FPModule> {
        if let Some(e) = self.modules.iter().find(|e| e.name == name) {
            return Ok(e.module.clone());
        }
        builtin(&self.ctx, name).ok_or_else(|| Error::Semantic(format!("unknown module `{name}`")))
    }

    pub fn pair(&self, name: &str) -> Result<(FPModule, FPModule)> {
        let p = self
            .pairs
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::Semantic(format!("unknown pair `{name}`")))?;
        Ok((self.module(&p.left)?, self.module(&p.right)?))
    }

    pub fn sequence(&self, name: &str) -> Result<&SesEntry> {
        self.sequences
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::Semantic(format!("unknown ses `{name}`")))
    }
}

fn builtin(ctx: &RingContext, name: &str) -> Option<FPModule> {
    let n: usize = name.strip_prefix('R')?.parse().ok()?;
    (n >= 1 && !name.starts_with("R0")).then(|| FPModule::free_rank(ctx, n))
}

struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    fn at(&self, offset: usize, message: impl Into<String>) -> Error {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn line_of(&self, offset: usize) -> usize {
        self.text[..offset].matches('\n').count() + 1
    }
}

/// A `key = value` inside a block, with the value's byte offset.
#[derive(Clone, Debug)]
struct Field {
    key: String,
    value: String,
    offset: usize,
}

#[derive(Debug)]
struct Block {
    kind: String,
    name: Option<String>,
    fields: Vec<Field>,
    offset: usize,
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'-'
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| match l.find('#') {
            Some(i) => format!("{}{}", &l[..i], " ".repeat(l.len() - i)),
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_blocks(src: &Source, clean: &str) -> Result<Vec<Block>> {
    let b = clean.as_bytes();
    let mut i = 0;
    let mut blocks = Vec::new();
    let skip_ws = |i: &mut usize| {
        while *i < b.len() && b[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    let ident = |i: &mut usize| -> Option<String> {
        let start = *i;
        while *i < b.len() && is_ident_char(b[*i]) {
            *i += 1;
        }
        (start < *i).then(|| clean[start..*i].to_string())
    };
    loop {
        skip_ws(&mut i);
        if i >= b.len() {
            break;
        }
        let offset = i;
        let kind = ident(&mut i).ok_or_else(|| src.at(i, "expected a block keyword"))?;
        skip_ws(&mut i);
        let name = if i < b.len() && b[i] != b'{' {
            Some(ident(&mut i).ok_or_else(|| src.at(i, "expected a block name or `{`"))?)
        } else {
            None
        };
        skip_ws(&mut i);
        if i >= b.len() || b[i] != b'{' {
            return Err(src.at(i, format!("expected `{{` to open the {kind} block")));
        }
        let open = i + 1;
        let close = clean[open..]
            .find(['}', '{'])
            .map(|k| open + k)
            .filter(|&k| b[k] == b'}')
            .ok_or_else(|| src.at(offset, format!("unterminated {kind} block")))?;
        let fields = parse_fields(src, clean, open, close)?;
        blocks.push(Block {
            kind,
            name,
            fields,
            offset,
        });
        i = close + 1;
    }
    Ok(blocks)
}

fn parse_fields(src: &Source, clean: &str, start: usize, end: usize) -> Result<Vec<Field>> {
    let b = clean.as_bytes();
    // (key start, key, value start)
    let mut keys: Vec<(usize, String, usize)> = Vec::new();
    for eq in (start..end).filter(|&k| b[k] == b'=') {
        let mut k = eq;
        while k > start && b[k - 1].is_ascii_whitespace() {
            k -= 1;
        }
        let key_end = k;
        while k > start && is_ident_char(b[k - 1]) {
            k -= 1;
        }
        if k == key_end {
            return Err(src.at(eq, "`=` without a key"));
        }
        keys.push((k, clean[k..key_end].to_string(), eq + 1));
    }
    let lead_end = keys.first().map_or(end, |k| k.0);
    if !clean[start..lead_end].trim().is_empty() {
        let off = start + clean[start..lead_end].find(|c: char| !c.is_whitespace()).unwrap_or(0);
        return Err(src.at(off, "expected `key = value`"));
    }
    let mut fields = Vec::with_capacity(keys.len());
    for (n, (_, key, vstart)) in keys.iter().enumerate() {
        let vend = keys.get(n + 1).map_or(end, |k| k.0);
        let raw = &clean[*vstart..vend];
        let lead = raw.len() - raw.trim_start().len();
        let value = raw.trim().to_string();
        if value.is_empty() {
            return Err(src.at(*vstart, format!("empty value for `{key}`")));
        }
        fields.push(Field {
            key: key.clone(),
            value,
            offset: vstart + lead,
        });
    }
    Ok(fields)
}

struct Reader<'a> {
    src: &'a Source<'a>,
    block: &'a Block,
}

impl Reader<'_> {
    fn all(&self, key: &str) -> Vec<&Field> {
        self.block.fields.iter().filter(|f| f.key == key).collect()
    }

    fn get(&self, key: &str) -> Result<Option<&Field>> {
        match self.all(key).as_slice() {
            [] => Ok(None),
            [f] => Ok(Some(f)),
            [_, second, ..] => Err(self.src.at(second.offset, format!("`{key}` given twice"))),
        }
    }

    fn require(&self, key: &str) -> Result<&Field> {
        self.get(key)?.ok_or_else(|| {
            self.src
                .at(self.block.offset, format!("{} block needs `{key}`", self.block.kind))
        })
    }

    fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.block.fields.iter().find(|f| !allowed.contains(&f.key.as_str())) {
            Some(f) => Err(self.src.at(
                f.offset,
                format!("unknown key `{}` in {} block", f.key, self.block.kind),
            )),
            None => Ok(()),
        }
    }

    fn ints(&self, f: &Field) -> Result<Vec<i64>> {
        f.value
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| self.src.at(f.offset, format!("`{t}` is not an integer")))
            })
            .collect()
    }

    fn int(&self, f: &Field) -> Result<i64> {
        match self.ints(f)?.as_slice() {
            [v] => Ok(*v),
            _ => Err(self.src.at(f.offset, format!("`{}` expects one integer", f.key))),
        }
    }

    fn names(&self, f: &Field) -> Vec<String> {
        f.value
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(String::from)
            .collect()
    }

    fn name(&self, f: &Field) -> Result<String> {
        match self.names(f).as_slice() {
            [n] => Ok(n.clone()),
            _ => Err(self.src.at(f.offset, format!("`{}` expects one name", f.key))),
        }
    }

    fn poly(&self, ring: &PolyRing, text: &str, offset: usize) -> Result<Polynomial> {
        ring.parse(text).map_err(|e| match e {
            Error::Syntax { column, message, .. } => self.src.at(offset + column.saturating_sub(1), message),
            other => self.src.at(offset, other.to_string()),
        })
    }

    fn polys(&self, ring: &PolyRing, f: &Field) -> Result<Vec<Polynomial>> {
        let mut out = Vec::new();
        let mut at = f.offset;
        for part in f.value.split(',') {
            let lead = part.len() - part.trim_start().len();
            out.push(self.poly(ring, part.trim(), at + lead)?);
            at += part.len() + 1;
        }
        Ok(out)
    }

    /// `[a, b; c, d]`: rows split by `;`, entries by `,`.
    fn matrix(&self, ring: &PolyRing, f: &Field) -> Result<Vec<Vec<Polynomial>>> {
        let v = f.value.as_str();
        if !(v.starts_with('[') && v.ends_with(']')) {
            return Err(self.src.at(f.offset, "a matrix is written `[a, b; c, d]`"));
        }
        let inner = &v[1..v.len() - 1];
        let mut rows = Vec::new();
        let mut at = f.offset + 1;
        for row in inner.split(';') {
            let mut entries = Vec::new();
            let mut col_at = at;
            for part in row.split(',') {
                let lead = part.len() - part.trim_start().len();
                entries.push(self.poly(ring, part.trim(), col_at + lead)?);
                col_at += part.len() + 1;
            }
            at += row.len() + 1;
            rows.push(entries);
        }
        if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
            return Err(self.src.at(f.offset, "matrix rows have different lengths"));
        }
        Ok(rows)
    }
}

fn parse_ring(r: &Reader) -> Result<RingContext> {
    r.only(&["p", "vars", "weights", "f", "domain"])?;
    let p = match r.get("p")? {
        Some(f) => u64::try_from(r.int(f)?).map_err(|_| r.src.at(f.offset, "p must be positive"))?,
        None => 32003,
    };
    let field = PrimeField::new(p).map_err(|e| r.src.at(r.block.offset, e.to_string()))?;
    let vars: [String; NVARS] = match r.get("vars")? {
        Some(f) => r
            .names(f)
            .try_into()
            .map_err(|_| r.src.at(f.offset, format!("exactly {NVARS} variables are required")))?,
        None => ["x", "y", "z", "w"].map(String::from),
    };
    let weights: [u32; NVARS] = match r.get("weights")? {
        Some(f) => {
            let ws = r.ints(f)?;
            let ws: Vec<u32> = ws
                .iter()
                .map(|&w| u32::try_from(w).ok().filter(|&w| w > 0))
                .collect::<Option<_>>()
                .ok_or_else(|| r.src.at(f.offset, "weights must be positive integers"))?;
            ws.try_into()
                .map_err(|_| r.src.at(f.offset, format!("exactly {NVARS} weights are required")))?
        }
        None => [1; NVARS],
    };
    let domain = match r.get("domain")? {
        Some(f) => match f.value.as_str() {
            "yes" | "true" => true,
            "no" | "false" => false,
            _ => return Err(r.src.at(f.offset, "domain is `yes` or `no`")),
        },
        None => false,
    };
    let ring = PolyRing::new(field, vars, weights).map_err(|e| r.src.at(r.block.offset, e.to_string()))?;
    let ff = r.require("f")?;
    let f = r.poly(&ring, &ff.value, ff.offset)?;
    RingContext::new(ring, f, domain).map_err(|e| r.src.at(ff.offset, e.to_string()))
}

const MODULE_FORMS: [&str; 9] = [
    "gens", "quotient", "ideal", "free", "hom", "dual", "sum", "tensor", "syzygy",
];

fn parse_module_decl(r: &Reader, ctx: &RingContext) -> Result<(ModuleDecl, Mode)> {
    let forms: Vec<&str> = MODULE_FORMS.iter().copied().filter(|k| !r.all(k).is_empty()).collect();
    let form = match forms.as_slice() {
        [one] => *one,
        [] => {
            return Err(r.src.at(
                r.block.offset,
                "module block needs one of gens/quotient/ideal/free/hom/dual/sum/tensor/syzygy",
            ))
        }
        [_, second, ..] => {
            let f = r.require(second)?;
            return Err(r.src.at(f.offset, "a module block declares exactly one form"));
        }
    };
    let mode = match r.get("mode")? {
        None => Mode::R,
        Some(f) => match f.value.as_str() {
            "S" => Mode::S,
            "R" => Mode::R,
            _ => return Err(r.src.at(f.offset, "mode is `R` or `S`")),
        },
    };
    let ring = ctx.ring();
    let degrees = |f: &Field| -> Result<Vec<i32>> {
        r.ints(f)?
            .into_iter()
            .map(|d| i32::try_from(d).map_err(|_| r.src.at(f.offset, "degree out of range")))
            .collect()
    };
    let decl = match form {
        "gens" => {
            r.only(&["gens", "gendegs", "rel", "mode"])?;
            let gf = r.require("gens")?;
            let n = usize::try_from(r.int(gf)?).map_err(|_| r.src.at(gf.offset, "gens must be non-negative"))?;
            let gen_degrees = match r.get("gendegs")? {
                Some(f) => degrees(f)?,
                None => vec![0; n],
            };
            if gen_degrees.len() != n {
                let f = r.require("gendegs")?;
                return Err(r
                    .src
                    .at(f.offset, format!("{} degrees for {n} generators", gen_degrees.len())));
            }
            let mut relations = Vec::new();
            for f in r.all("rel") {
                let col = r.polys(ring, f)?;
                if col.len() != n {
                    return Err(r
                        .src
                        .at(f.offset, format!("relation has {} entries, expected {n}", col.len())));
                }
                // validate each column on its own so the error points at its line
                FPModule::new(ctx, gen_degrees.clone(), vec![col.clone()])
                    .map_err(|e| r.src.at(f.offset, format!("relation {}: {e}", relations.len() + 1)))?;
                relations.push(col);
            }
            ModuleDecl::Presented { gen_degrees, relations }
        }
        "quotient" | "ideal" => {
            r.only(&[form, "mode"])?;
            let gens = r.polys(ring, r.require(form)?)?;
            if form == "quotient" {
                ModuleDecl::Quotient(gens)
            } else {
                ModuleDecl::Ideal(gens)
            }
        }
        "free" => {
            r.only(&["free", "gendegs", "mode"])?;
            let f = r.require("free")?;
            let n = usize::try_from(r.int(f)?).map_err(|_| r.src.at(f.offset, "rank must be non-negative"))?;
            let degs = match r.get("gendegs")? {
                Some(g) => degrees(g)?,
                None => vec![0; n],
            };
            if degs.len() != n {
                return Err(r.src.at(f.offset, format!("{} degrees for rank {n}", degs.len())));
            }
            ModuleDecl::Free(degs)
        }
        _ => {
            r.only(&[form])?;
            let f = r.require(form)?;
            let names = r.names(f);
            let two = |names: &[String]| -> Result<(String, String)> {
                match names {
                    [a, b] => Ok((a.clone(), b.clone())),
                    _ => Err(r.src.at(f.offset, format!("`{form}` takes two module names"))),
                }
            };
            match form {
                "hom" => {
                    let (a, b) = two(&names)?;
                    ModuleDecl::Hom(a, b)
                }
                "tensor" => {
                    let (a, b) = two(&names)?;
                    ModuleDecl::Tensor(a, b)
                }
                "dual" => ModuleDecl::Dual(r.name(f)?),
                "sum" if names.len() >= 2 => ModuleDecl::Sum(names),
                "sum" => return Err(r.src.at(f.offset, "`sum` takes at least two module names")),
                _ => match names.as_slice() {
                    [a, i] => {
                        let i = i
                            .parse::<usize>()
                            .map_err(|_| r.src.at(f.offset, "syzygy index must be a non-negative integer"))?;
                        ModuleDecl::Syzygy(a.clone(), i)
                    }
                    _ => return Err(r.src.at(f.offset, "`syzygy` takes a module name and an index")),
                },
            }
        }
    };
    Ok((decl, mode))
}

fn build_module(
    engine: &Engine,
    ctx: &RingContext,
    decl: &ModuleDecl,
    mode: Mode,
    lookup: &dyn Fn(&str) -> Result<FPModule>,
) -> Result<FPModule> {
    let base = ctx.with_mode(mode);
    Ok(match decl {
        ModuleDecl::Presented { gen_degrees, relations } => {
            FPModule::new(&base, gen_degrees.clone(), relations.clone())?
        }
        ModuleDecl::Quotient(g) => FPModule::cyclic(&base, g)?,
        ModuleDecl::Ideal(g) => engine.ideal_module(&base, g)?,
        ModuleDecl::Free(d) => FPModule::free(&base, d.clone()),
        ModuleDecl::Hom(a, b) => engine.hom_module(&lookup(a)?, &lookup(b)?)?.module,
        ModuleDecl::Dual(a) => engine.dual(&lookup(a)?)?.module,
        ModuleDecl::Sum(names) => {
            let mut acc = lookup(&names[0])?;
            for n in &names[1..] {
                acc = acc.direct_sum(&lookup(n)?)?;
            }
            acc
        }
        ModuleDecl::Tensor(a, b) => lookup(a)?.tensor(&lookup(b)?)?,
        ModuleDecl::Syzygy(a, i) => engine.syzygy_module(&lookup(a)?, *i)?,
    })
}

/// Parse and validate a whole file. Derived modules (`hom`, `dual`,
/// `syzygy`) are computed with `engine`.
pub fn parse_document(text: &str, engine: &Engine) -> Result<Document> {
    let src = Source { text };
    let clean = strip_comments(text);
    let blocks = parse_blocks(&src, &clean)?;
    let mut ctx: Option<RingContext> = None;
    let mut modules: Vec<ModuleEntry> = Vec::new();
    let mut pairs: Vec<PairEntry> = Vec::new();
    let mut sequences: Vec<SesEntry> = Vec::new();
    let mut expectations = Vec::new();
    for block in &blocks {
        let r = Reader { src: &src, block };
        let named = matches!(block.kind.as_str(), "module" | "pair" | "ses");
        if named != block.name.is_some() {
            let what = if named { "needs a name" } else { "takes no name" };
            return Err(src.at(block.offset, format!("a {} block {what}", block.kind)));
        }
        if block.kind == "ring" {
            if ctx.is_some() {
                return Err(src.at(block.offset, "only one ring block is allowed"));
            }
            ctx = Some(parse_ring(&r)?);
            continue;
        }
        let Some(ring_ctx) = ctx.as_ref() else {
            return Err(src.at(block.offset, "the ring block must come first"));
        };
        let name = block.name.clone().unwrap_or_default();
        let lookup = |n: &str| -> Result<FPModule> {
            if let Some(e) = modules.iter().find(|e| e.name == n) {
                return Ok(e.module.clone());
            }
            builtin(ring_ctx, n).ok_or_else(|| Error::Semantic(format!("unknown module `{n}`")))
        };
        match block.kind.as_str() {
            "module" => {
                if modules.iter().any(|e| e.name == name) || builtin(ring_ctx, &name).is_some() {
                    return Err(src.at(block.offset, format!("module `{name}` is already defined")));
                }
                let (decl, mode) = parse_module_decl(&r, ring_ctx)?;
                let module = build_module(engine, ring_ctx, &decl, mode, &lookup).map_err(|e| match e {
                    // computation failures keep their kind so callers can tell them from typos
                    Error::ResourceBound(m) => {
                        Error::ResourceBound(format!("module `{name}` (line {}): {m}", src.line_of(block.offset)))
                    }
                    e => src.at(block.offset, format!("module `{name}`: {e}")),
                })?;
                modules.push(ModuleEntry {
                    name,
                    decl,
                    mode,
                    module,
                });
            }
            "pair" => {
                r.only(&["left", "right"])?;
                if pairs.iter().any(|p| p.name == name) {
                    return Err(src.at(block.offset, format!("pair `{name}` is already defined")));
                }
                let left = r.name(r.require("left")?)?;
                let right = r.name(r.require("right")?)?;
                for (n, f) in [(&left, "left"), (&right, "right")] {
                    let m = lookup(n).map_err(|e| src.at(r.require(f).unwrap().offset, e.to_string()))?;
                    if m.ctx().mode() != Mode::R {
                        return Err(src.at(block.offset, format!("pair `{name}` needs modules over R")));
                    }
                }
                pairs.push(PairEntry { name, left, right });
            }
            "ses" => {
                r.only(&["sub", "mid", "quot", "inj", "surj", "injdeg", "surjdeg"])?;
                if sequences.iter().any(|s| s.name == name) {
                    return Err(src.at(block.offset, format!("ses `{name}` is already defined")));
                }
                let names: Vec<String> = ["sub", "mid", "quot"]
                    .iter()
                    .map(|k| r.require(k).and_then(|f| r.name(f)))
                    .collect::<Result<_>>()?;
                let mods: Vec<FPModule> = ["sub", "mid", "quot"]
                    .iter()
                    .zip(&names)
                    .map(|(k, n)| lookup(n).map_err(|e| src.at(r.require(k).unwrap().offset, e.to_string())))
                    .collect::<Result<_>>()?;
                let deg = |k: &str| -> Result<i32> {
                    match r.get(k)? {
                        Some(f) => i32::try_from(r.int(f)?).map_err(|_| src.at(f.offset, "degree out of range")),
                        None => Ok(0),
                    }
                };
                let (inj_degree, surj_degree) = (deg("injdeg")?, deg("surjdeg")?);
                let map = |key: &str, s: &FPModule, t: &FPModule, d: i32| -> Result<ModuleMap> {
                    let f = r.require(key)?;
                    let rows = r.matrix(ring_ctx.ring(), f)?;
                    let m = PolyMatrix::from_rows(rows).map_err(|e| src.at(f.offset, e.to_string()))?;
                    ModuleMap::new(s, t, m, d).map_err(|e| src.at(f.offset, e.to_string()))
                };
                let inj = map("inj", &mods[0], &mods[1], inj_degree)?;
                let surj = map("surj", &mods[1], &mods[2], surj_degree)?;
                sequences.push(SesEntry {
                    name,
                    sub: names[0].clone(),
                    mid: names[1].clone(),
                    quot: names[2].clone(),
                    inj_degree,
                    surj_degree,
                    ses: ShortExact { inj, surj },
                });
            }
            "expect" => {
                r.only(&["op", "on", "value", "provenance", "index", "with", "g", "steps"])?;
                let op = r.name(r.require("op")?)?;
                let on = r.name(r.require("on")?)?;
                let value = normalize_value(&r.require("value")?.value);
                let provenance = match r.get("provenance")? {
                    Some(f) => r.name(f)?,
                    None => "unspecified".into(),
                };
                let mut args = BTreeMap::new();
                for k in ["index", "with", "g", "steps"] {
                    if let Some(f) = r.get(k)? {
                        args.insert(k.to_string(), f.value.clone());
                    }
                }
                expectations.push(Expectation {
                    op,
                    on,
                    value,
                    provenance,
                    args,
                    line: src.line_of(block.offset),
                });
            }
            other => return Err(src.at(block.offset, format!("unknown block `{other}`"))),
        }
    }
    let ctx = ctx.ok_or_else(|| src.at(text.len(), "missing ring block"))?;
    Ok(Document {
        ctx,
        modules,
        pairs,
        sequences,
        expectations,
    })
}

/// Collapse whitespace and separators so `1, 4,7` and `1 4 7` compare equal.
pub fn normalize_value(v: &str) -> String {
    v.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join(",")
}

fn join_polys(ring: &PolyRing, ps: &[Polynomial]) -> String {
    ps.iter().map(|p| ring.format(p)).collect::<Vec<_>>().join(", ")
}

fn join_ints(v: &[i32]) -> String {
    v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
}

/// `[a, b; c, d]`, rows separated by `;`, as accepted in `ses` blocks.
pub fn format_matrix(ring: &PolyRing, m: &PolyMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| ring.format(m.get(i, j)))
                .collect::<Vec<_>>()
                .join(", ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

/// The canonical text of a document; parsing it yields an equal document.
pub fn print_document(doc: &Document) -> String {
    let ctx = &doc.ctx;
    let ring = ctx.ring();
    let mut out = String::new();
    let w = ring.weights();
    let _ = writeln!(
        out,
        "ring {{ p = {}  vars = {}  weights = {} {} {} {}  f = {}  domain = {} }}",
        ctx.field().characteristic(),
        ring.variables().join(" "),
        w[0],
        w[1],
        w[2],
        w[3],
        ring.format(ctx.f()),
        if ctx.is_domain() { "yes" } else { "no" }
    );
    for e in &doc.modules {
        let mode = if e.mode == Mode::S { "  mode = S" } else { "" };
        let body = match &e.decl {
            ModuleDecl::Presented { gen_degrees, relations } => {
                let mut s = format!("gens = {}", gen_degrees.len());
                if !gen_degrees.is_empty() {
                    let _ = write!(s, "  gendegs = {}", join_ints(gen_degrees));
                }
                for col in relations {
                    let _ = write!(s, "\n  rel = {}", join_polys(ring, col));
                }
                s
            }
            ModuleDecl::Quotient(g) => format!("quotient = {}", join_polys(ring, g)),
            ModuleDecl::Ideal(g) => format!("ideal = {}", join_polys(ring, g)),
            ModuleDecl::Free(d) if d.is_empty() => "free = 0".to_string(),
            ModuleDecl::Free(d) => format!("free = {}  gendegs = {}", d.len(), join_ints(d)),
            ModuleDecl::Hom(a, b) => format!("hom = {a}, {b}"),
            ModuleDecl::Dual(a) => format!("dual = {a}"),
            ModuleDecl::Sum(v) => format!("sum = {}", v.join(", ")),
            ModuleDecl::Tensor(a, b) => format!("tensor = {a}, {b}"),
            ModuleDecl::Syzygy(a, i) => format!("syzygy = {a}, {i}"),
        };
        let _ = writeln!(out, "module {} {{ {body}{mode} }}", e.name);
    }
    for p in &doc.pairs {
        let _ = writeln!(out, "pair {} {{ left = {}  right = {} }}", p.name, p.left, p.right);
    }
    for s in &doc.sequences {
        let mut degs = String::new();
        if s.inj_degree != 0 {
            let _ = write!(degs, "  injdeg = {}", s.inj_degree);
        }
        if s.surj_degree != 0 {
            let _ = write!(degs, "  surjdeg = {}", s.surj_degree);
        }
        let _ = writeln!(
            out,
            "ses {} {{ sub = {}  mid = {}  quot = {}\n  inj = {}\n  surj = {}{degs} }}",
            s.name,
            s.sub,
            s.mid,
            s.quot,
            format_matrix(ring, &s.ses.inj.matrix),
            format_matrix(ring, &s.ses.surj.matrix)
        );
    }
    for x in &doc.expectations {
        let mut extra = String::new();
        for (k, v) in &x.args {
            let _ = write!(extra, "  {k} = {v}");
        }
        let _ = writeln!(
            out,
            "expect {{ op = {}  on = {}{extra}  value = {}  provenance = {} }}",
            x.op, x.on, x.value, x.provenance
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const QC: &str = "\
ring { p = 101  vars = x y z w  weights = 1 1 1 1  f = x*y - z*w  domain = yes }
module I_xz { gens = 2  gendegs = 1 1
  rel = y, -w        # one relation column per line
  rel = z, -x }
module Mxz { quotient = x, z }
pair P1 { left = I_xz  right = Mxz }
ses S1 { sub = I_xz  mid = R1  quot = Mxz  inj = [x, z]  surj = [1] }
expect { op = theta  on = P1  value = -1  provenance = oracle }
";

    fn parse(text: &str) -> Result<Document> {
        parse_document(text, &Engine::default())
    }

    #[test]
    fn parses_the_reference_layout() {
        let doc = parse(QC).unwrap();
        assert_eq!(doc.modules.len(), 2);
        assert_eq!(doc.module("I_xz").unwrap().nrels(), 2);
        assert_eq!(doc.module("R3").unwrap().ngens(), 3);
        assert_eq!(doc.pairs[0].right, "Mxz");
        assert_eq!(doc.expectations[0].value, "-1");
        assert_eq!(doc.expectations[0].line, 8);
        assert!(doc.ctx.is_domain());
    }

    #[test]
    fn round_trip_is_identity() {
        let doc = parse(QC).unwrap();
        let text = print_document(&doc);
        let again = parse(&text).unwrap();
        assert_eq!(again, doc);
        assert_eq!(print_document(&again), text);
    }

    #[test]
    fn errors_carry_positions() {
        let bad = QC.replace("rel = z, -x", "rel = z, -x*y");
        let err = parse(&bad).unwrap_err();
        match err {
            Error::Syntax { line, message, .. } => {
                assert_eq!(line, 4);
                assert!(message.contains("relation 2"), "{message}");
            }
            e => panic!("unexpected {e:?}"),
        }
        let redefined = format!("{QC}module Mxz {{ quotient = y }}\n");
        assert!(matches!(parse(&redefined), Err(Error::Syntax { line: 9, .. })));
        let unknown_var = QC.replace("quotient = x, z", "quotient = x, q");
        match parse(&unknown_var).unwrap_err() {
            Error::Syntax { line, column, .. } => assert_eq!((line, column), (5, 28)),
            e => panic!("unexpected {e:?}"),
        }
        assert!(parse("module A { free = 1 }").is_err());
        assert!(parse("ring { f = x*y - z*w ").is_err());
        assert!(parse("ring { f = x*y - z*w  colour = red }").is_err());
    }

    #[test]
    fn derived_forms() {
        let text = format!(
            "{QC}module H {{ hom = I_xz, I_xz }}\nmodule D {{ dual = I_xz }}\nmodule T {{ sum = I_xz, R1 }}\n\
             module O {{ syzygy = Mxz, 1 }}\nmodule F {{ free = 2  gendegs = 0 1  mode = S }}\n"
        );
        let doc = parse(&text).unwrap();
        assert_eq!(doc.module("T").unwrap().ngens(), 3);
        assert_eq!(doc.module("F").unwrap().ctx().mode(), Mode::S);
        assert_eq!(parse(&print_document(&doc)).unwrap(), doc);
    }
}
