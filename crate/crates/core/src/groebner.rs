//! Gröbner bases for submodules of graded free modules over `S`.
//!
//! Elements of `S^n` are sparse term lists ordered position-over-term: a term
//! in component `i` beats every term in component `j > i`, and within one
//! component the monomial order decides. Computations "over `R = S/(f)`"
//! append the hidden generators `f·e_i` and run over `S`.
//!
//! The engine is a degree-by-degree Buchberger loop (normal selection: lowest
//! degree first, FIFO within a degree; first divisor wins during reduction).
//! For homogeneous input it also reports which input generators are minimal,
//! which is how minimal presentations and minimal resolutions are obtained.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::poly::{Monomial, PolyRing, Polynomial, NVARS};

/// Resource ceilings; exceeding one is a hard error rather than a slow run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of basis elements one computation may hold.
    pub max_basis: usize,
    /// Largest unweighted total degree of a basis element's lead monomial.
    pub max_degree: u32,
    /// Longest resolution prefix over `R` that may be requested.
    pub max_steps: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_basis: 20_000,
            max_degree: 64,
            max_steps: 10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModTerm {
    pub comp: u32,
    pub mono: Monomial,
    pub coef: FieldElement,
}

#[inline]
fn term_cmp(ac: u32, am: &Monomial, bc: u32, bm: &Monomial) -> Ordering {
    bc.cmp(&ac).then_with(|| am.cmp(bm))
}

/// An element of a free module `S^n`, terms descending in the POT order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ModElem {
    terms: Vec<ModTerm>,
}

impl ModElem {
    pub fn zero() -> Self {
        ModElem { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[ModTerm] {
        &self.terms
    }

    pub fn lead(&self) -> Option<&ModTerm> {
        self.terms.first()
    }

    /// The basis vector `e_i`.
    pub fn basis(i: usize) -> Self {
        ModElem {
            terms: vec![ModTerm {
                comp: i as u32,
                mono: Monomial::ONE,
                coef: 1,
            }],
        }
    }

    /// `g·e_i`.
    pub fn scalar_basis(i: usize, g: &Polynomial) -> Self {
        ModElem {
            terms: g
                .terms()
                .iter()
                .map(|&(mono, coef)| ModTerm {
                    comp: i as u32,
                    mono,
                    coef,
                })
                .collect(),
        }
    }

    pub fn from_column(col: &[Polynomial]) -> Self {
        Self::from_column_at(col, 0)
    }

    /// Column placed in components `offset..offset+col.len()`.
    pub fn from_column_at(col: &[Polynomial], offset: usize) -> Self {
        let mut terms = Vec::new();
        for (i, p) in col.iter().enumerate() {
            terms.extend(p.terms().iter().map(|&(mono, coef)| ModTerm {
                comp: (i + offset) as u32,
                mono,
                coef,
            }));
        }
        ModElem { terms }
    }

    /// Coordinates in `S^n`.
    pub fn to_column(&self, ring: &PolyRing, n: usize) -> Vec<Polynomial> {
        let mut parts: Vec<Vec<(Monomial, FieldElement)>> = vec![Vec::new(); n];
        for t in &self.terms {
            parts[t.comp as usize].push((t.mono, t.coef));
        }
        parts.into_iter().map(|v| ring.from_terms(v)).collect()
    }

    /// Coordinates in components `offset..offset+n`, ignoring all others.
    pub fn column_slice(&self, ring: &PolyRing, offset: usize, n: usize) -> Vec<Polynomial> {
        let mut parts: Vec<Vec<(Monomial, FieldElement)>> = vec![Vec::new(); n];
        for t in &self.terms {
            let c = t.comp as usize;
            if c >= offset && c < offset + n {
                parts[c - offset].push((t.mono, t.coef));
            }
        }
        parts.into_iter().map(|v| ring.from_terms(v)).collect()
    }

    /// Keep only components in `lo..hi`, renumbered to start at zero.
    pub fn restrict(&self, lo: usize, hi: usize) -> ModElem {
        ModElem {
            terms: self
                .terms
                .iter()
                .filter(|t| (t.comp as usize) >= lo && (t.comp as usize) < hi)
                .map(|t| ModTerm {
                    comp: t.comp - lo as u32,
                    ..*t
                })
                .collect(),
        }
    }

    /// Delete component `i`, renumbering the later ones down by one.
    pub fn drop_component(&self, i: usize) -> ModElem {
        let i = i as u32;
        ModElem {
            terms: self
                .terms
                .iter()
                .filter(|t| t.comp != i)
                .map(|t| ModTerm {
                    comp: if t.comp > i { t.comp - 1 } else { t.comp },
                    ..*t
                })
                .collect(),
        }
    }

    /// Renumber components by adding `offset`.
    pub fn shifted(&self, offset: usize) -> ModElem {
        ModElem {
            terms: self
                .terms
                .iter()
                .map(|t| ModTerm {
                    comp: t.comp + offset as u32,
                    ..*t
                })
                .collect(),
        }
    }

    /// Degree of the lead term under component labels.
    pub fn degree(&self, degrees: &[i32]) -> Option<i32> {
        self.lead().map(|t| t.mono.degree() as i32 + degrees[t.comp as usize])
    }

    pub fn is_homogeneous(&self, degrees: &[i32]) -> bool {
        match self.degree(degrees) {
            None => true,
            Some(d) => self
                .terms
                .iter()
                .all(|t| t.mono.degree() as i32 + degrees[t.comp as usize] == d),
        }
    }

    pub fn scale(&self, k: &PrimeField, c: FieldElement) -> ModElem {
        if c == 0 {
            return ModElem::zero();
        }
        ModElem {
            terms: self
                .terms
                .iter()
                .map(|t| ModTerm {
                    coef: k.mul(t.coef, c),
                    ..*t
                })
                .collect(),
        }
    }

    pub fn mul_poly(&self, ring: &PolyRing, g: &Polynomial) -> ModElem {
        let mut acc = ModElem::zero();
        for &(m, c) in g.terms() {
            acc = acc.add_scaled_shifted(ring.field(), c, &m, self);
        }
        acc
    }

    pub fn add(&self, k: &PrimeField, other: &ModElem) -> ModElem {
        self.add_scaled_shifted(k, 1, &Monomial::ONE, other)
    }

    pub fn sub(&self, k: &PrimeField, other: &ModElem) -> ModElem {
        self.add_scaled_shifted(k, k.neg(1), &Monomial::ONE, other)
    }

    /// `self + c·m·g`.
    pub fn add_scaled_shifted(&self, k: &PrimeField, c: FieldElement, m: &Monomial, g: &ModElem) -> ModElem {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        merge_into(&mut out, &self.terms, k, c, m, &g.terms);
        ModElem { terms: out }
    }

    pub(crate) fn make_monic(&mut self, k: &PrimeField) {
        if let Some(l) = self.terms.first() {
            if l.coef != 1 {
                let inv = k.inv(l.coef);
                for t in &mut self.terms {
                    t.coef = k.mul(t.coef, inv);
                }
            }
        }
    }
}

fn merge_into(out: &mut Vec<ModTerm>, a: &[ModTerm], k: &PrimeField, c: FieldElement, m: &Monomial, b: &[ModTerm]) {
    let (mut i, mut j) = (0, 0);
    if c == 0 {
        out.extend_from_slice(a);
        return;
    }
    while i < a.len() && j < b.len() {
        let ta = a[i];
        let bm = b[j].mono.mul(m);
        match term_cmp(ta.comp, &ta.mono, b[j].comp, &bm) {
            Ordering::Greater => {
                out.push(ta);
                i += 1;
            }
            Ordering::Less => {
                out.push(ModTerm {
                    comp: b[j].comp,
                    mono: bm,
                    coef: k.mul(c, b[j].coef),
                });
                j += 1;
            }
            Ordering::Equal => {
                let s = k.add(ta.coef, k.mul(c, b[j].coef));
                if s != 0 {
                    out.push(ModTerm { coef: s, ..ta });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        out.push(ModTerm {
            comp: t.comp,
            mono: t.mono.mul(m),
            coef: k.mul(c, t.coef),
        });
    }
}

/// Lead monomials of a basis, grouped by free-module component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadTermModule {
    pub degrees: Vec<i32>,
    pub gens: Vec<Vec<Monomial>>,
}

/// Result of [`std_monomial_count`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl Count {
    pub fn is_finite(&self) -> bool {
        matches!(self, Count::Finite(_))
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            Count::Finite(n) => Some(*n),
            Count::Infinite => None,
        }
    }
}

impl LeadTermModule {
    fn component_has_unit(&self, c: usize) -> bool {
        self.gens[c].iter().any(|m| m.is_one())
    }

    /// Number of monomial·basis-vector pairs outside the lead-term module.
    pub fn std_monomial_count(&self) -> Count {
        let mut total = 0u64;
        for gens in &self.gens {
            if gens.iter().any(|m| m.is_one()) {
                continue;
            }
            for v in 0..NVARS {
                let pure = gens.iter().any(|m| {
                    let e = m.exponents();
                    (0..NVARS).all(|u| u == v || e[u] == 0)
                });
                if !pure {
                    return Count::Infinite;
                }
            }
            total += count_standard(gens, [0; NVARS], 0);
        }
        Count::Finite(total)
    }

    /// Krull dimension of `S^n / lt`: the largest independent set of
    /// variables over all components; -1 for the zero quotient.
    pub fn dimension(&self) -> i32 {
        let mut best = -1;
        for c in 0..self.gens.len() {
            if self.component_has_unit(c) {
                continue;
            }
            let supports: Vec<u8> = self.gens[c].iter().map(|m| m.support()).collect();
            for u in 0u8..(1 << NVARS) {
                // independent: no generator lives entirely inside u
                if supports.iter().all(|&s| s & !u != 0) {
                    best = best.max(u.count_ones() as i32);
                }
            }
        }
        best
    }

    /// Standard-monomial counts of `S^n / lt` in each degree `0..=max_deg`
    /// (component labels included).
    pub fn graded_counts(&self, weights: &[u32; NVARS], max_deg: i32) -> Vec<u64> {
        let mut out = vec![0u64; (max_deg.max(-1) + 1) as usize];
        for (c, gens) in self.gens.iter().enumerate() {
            let shift = self.degrees[c];
            let budget = max_deg - shift;
            if budget < 0 {
                continue;
            }
            enumerate_by_degree(gens, weights, budget as u32, &mut |m: &Monomial| {
                out[(m.degree() as i32 + shift) as usize] += 1;
            });
        }
        out
    }
}

fn divisible_by_any(gens: &[Monomial], e: &[u16; NVARS]) -> bool {
    gens.iter().any(|g| {
        let ge = g.exponents();
        (0..NVARS).all(|i| ge[i] <= e[i])
    })
}

// Standard monomials form an order ideal, so for a fixed prefix the last free
// exponent can be increased until the first hit.
fn count_standard(gens: &[Monomial], mut e: [u16; NVARS], var: usize) -> u64 {
    if var == NVARS {
        return 1;
    }
    let mut total = 0;
    loop {
        if divisible_by_any(gens, &e) {
            return total;
        }
        total += count_standard(gens, e, var + 1);
        e[var] += 1;
    }
}

fn enumerate_by_degree(gens: &[Monomial], weights: &[u32; NVARS], budget: u32, visit: &mut impl FnMut(&Monomial)) {
    fn rec(
        gens: &[Monomial],
        weights: &[u32; NVARS],
        budget: u32,
        e: &mut [u16; NVARS],
        var: usize,
        used: u32,
        visit: &mut impl FnMut(&Monomial),
    ) {
        if var == NVARS {
            if !divisible_by_any(gens, e) {
                visit(&Monomial::with_weights(*e, weights));
            }
            return;
        }
        let mut k = 0u32;
        while used + k * weights[var] <= budget {
            e[var] = k as u16;
            rec(gens, weights, budget, e, var + 1, used + k * weights[var], visit);
            k += 1;
        }
        e[var] = 0;
    }
    let mut e = [0u16; NVARS];
    rec(gens, weights, budget, &mut e, 0, 0, visit);
}

/// Free-function form of [`LeadTermModule::std_monomial_count`].
pub fn std_monomial_count(lt: &LeadTermModule) -> Count {
    lt.std_monomial_count()
}

/// Free-function form of [`LeadTermModule::dimension`].
pub fn lt_dimension(lt: &LeadTermModule) -> i32 {
    lt.dimension()
}

/// A reduced Gröbner basis of a submodule of `S^n`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    field: PrimeField,
    weights: [u32; NVARS],
    degrees: Vec<i32>,
    elems: Vec<ModElem>,
    by_comp: Vec<Vec<usize>>,
    reduced: bool,
}

impl GroebnerBasis {
    fn empty(ring: &PolyRing, degrees: Vec<i32>) -> Self {
        let n = degrees.len();
        GroebnerBasis {
            field: *ring.field(),
            weights: *ring.weights(),
            degrees,
            elems: Vec::new(),
            by_comp: vec![Vec::new(); n],
            reduced: false,
        }
    }

    pub fn elements(&self) -> &[ModElem] {
        &self.elems
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    fn find_divisor(&self, comp: u32, mono: &Monomial) -> Option<usize> {
        self.by_comp[comp as usize]
            .iter()
            .copied()
            .find(|&k| self.elems[k].terms[0].mono.divides(mono))
    }

    /// Canonical remainder: no term divisible by a lead term of the basis.
    pub fn normal_form(&self, v: &ModElem) -> ModElem {
        let k = &self.field;
        let mut terms = v.terms.clone();
        let mut pos = 0;
        let mut scratch = Vec::new();
        while pos < terms.len() {
            let t = terms[pos];
            match self.find_divisor(t.comp, &t.mono) {
                None => pos += 1,
                Some(g) => {
                    let lead = self.elems[g].terms[0].mono;
                    let q = lead.quotient_of(&t.mono);
                    scratch.clear();
                    scratch.extend_from_slice(&terms[..pos]);
                    merge_into(&mut scratch, &terms[pos..], k, k.neg(t.coef), &q, &self.elems[g].terms);
                    std::mem::swap(&mut terms, &mut scratch);
                }
            }
        }
        ModElem { terms }
    }

    pub fn reduces_to_zero(&self, v: &ModElem) -> bool {
        // top-reduction suffices for a membership test
        let k = &self.field;
        let mut cur = v.clone();
        while let Some(t) = cur.lead().copied() {
            match self.find_divisor(t.comp, &t.mono) {
                None => return false,
                Some(g) => {
                    let lead = self.elems[g].terms[0].mono;
                    let q = lead.quotient_of(&t.mono);
                    cur = cur.add_scaled_shifted(k, k.neg(t.coef), &q, &self.elems[g]);
                }
            }
        }
        true
    }

    pub fn lead_terms(&self) -> LeadTermModule {
        let mut gens = vec![Vec::new(); self.degrees.len()];
        for e in &self.elems {
            let t = e.terms[0];
            gens[t.comp as usize].push(t.mono);
        }
        LeadTermModule {
            degrees: self.degrees.clone(),
            gens,
        }
    }

    fn insert(&mut self, mut h: ModElem, limits: &Limits) -> Result<usize> {
        h.make_monic(&self.field);
        let lead = h.terms[0];
        if lead.mono.total_degree() > limits.max_degree {
            return Err(Error::ResourceBound(format!(
                "basis element of degree {} exceeds the ceiling {}",
                lead.mono.total_degree(),
                limits.max_degree
            )));
        }
        if self.elems.len() >= limits.max_basis {
            return Err(Error::ResourceBound(format!(
                "Gröbner basis exceeds {} elements",
                limits.max_basis
            )));
        }
        let idx = self.elems.len();
        self.elems.push(h);
        self.by_comp[lead.comp as usize].push(idx);
        Ok(idx)
    }

    /// Drop redundant lead terms and fully reduce tails.
    fn interreduce(&mut self) {
        let n = self.elems.len();
        let mut keep = vec![true; n];
        for i in 0..n {
            let ti = self.elems[i].terms[0];
            for j in 0..n {
                if i == j || !keep[j] {
                    continue;
                }
                let tj = self.elems[j].terms[0];
                if tj.comp == ti.comp && tj.mono.divides(&ti.mono) && (tj.mono != ti.mono || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
        let kept: Vec<ModElem> = self
            .elems
            .drain(..)
            .zip(keep)
            .filter_map(|(e, k)| k.then_some(e))
            .collect();
        self.rebuild(kept);
        let mut reduced = Vec::with_capacity(self.elems.len());
        for i in 0..self.elems.len() {
            let e = &self.elems[i];
            let tail = ModElem {
                terms: e.terms[1..].to_vec(),
            };
            let mut t = self.normal_form_excluding(&tail, i);
            t.terms.insert(0, e.terms[0]);
            reduced.push(t);
        }
        // sort by lead term, descending, for a canonical element order
        reduced.sort_by(|a, b| {
            let (x, y) = (a.terms[0], b.terms[0]);
            term_cmp(y.comp, &y.mono, x.comp, &x.mono)
        });
        self.rebuild(reduced);
        self.reduced = true;
    }

    fn normal_form_excluding(&self, v: &ModElem, skip: usize) -> ModElem {
        let k = &self.field;
        let mut terms = v.terms.clone();
        let mut pos = 0;
        while pos < terms.len() {
            let t = terms[pos];
            let div = self.by_comp[t.comp as usize]
                .iter()
                .copied()
                .find(|&g| g != skip && self.elems[g].terms[0].mono.divides(&t.mono));
            match div {
                None => pos += 1,
                Some(g) => {
                    let q = self.elems[g].terms[0].mono.quotient_of(&t.mono);
                    let mut out = terms[..pos].to_vec();
                    merge_into(&mut out, &terms[pos..], k, k.neg(t.coef), &q, &self.elems[g].terms);
                    terms = out;
                }
            }
        }
        ModElem { terms }
    }

    fn rebuild(&mut self, elems: Vec<ModElem>) {
        self.elems = elems;
        for v in &mut self.by_comp {
            v.clear();
        }
        for (i, e) in self.elems.iter().enumerate() {
            self.by_comp[e.terms[0].comp as usize].push(i);
        }
    }

    /// Every S-pair reduces to zero (Buchberger's criterion). Test helper.
    pub fn is_confluent(&self) -> bool {
        for i in 0..self.elems.len() {
            for j in i + 1..self.elems.len() {
                if let Some(s) = s_vector(&self.field, &self.weights, &self.elems[i], &self.elems[j]) {
                    if !self.reduces_to_zero(&s) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn s_vector(k: &PrimeField, weights: &[u32; NVARS], a: &ModElem, b: &ModElem) -> Option<ModElem> {
    let (ta, tb) = (a.terms[0], b.terms[0]);
    if ta.comp != tb.comp {
        return None;
    }
    let l = ta.mono.lcm(&tb.mono, weights);
    let qa = ta.mono.quotient_of(&l);
    let qb = tb.mono.quotient_of(&l);
    let ca = k.inv(ta.coef);
    let cb = k.neg(k.inv(tb.coef));
    let s = ModElem::zero()
        .add_scaled_shifted(k, ca, &qa, a)
        .add_scaled_shifted(k, cb, &qb, b);
    Some(s)
}

/// One input of a Gröbner computation. Hidden inputs belong to the
/// submodule but are never reported as minimal generators (they are the
/// `f·e_i` of a quotient computation).
#[derive(Clone, Debug)]
pub struct GbInput {
    pub elem: ModElem,
    pub hidden: bool,
}

/// Output of [`compute`].
#[derive(Clone, Debug)]
pub struct GbOutcome {
    pub basis: GroebnerBasis,
    /// Indices (into the input list) of non-hidden inputs that were not in
    /// the span of earlier inputs. For homogeneous input this is a minimal
    /// generating set of the submodule modulo the hidden part.
    pub minimal: Vec<usize>,
}

/// The Buchberger loop. Inputs are consumed by ascending degree, hidden
/// first within a degree; pending S-pairs of a degree are processed before
/// the inputs of that degree.
pub fn compute(ring: &PolyRing, degrees: &[i32], inputs: &[GbInput], limits: &Limits) -> Result<GbOutcome> {
    let k = *ring.field();
    let weights = *ring.weights();
    let mut gb = GroebnerBasis::empty(ring, degrees.to_vec());

    let mut order: Vec<usize> = (0..inputs.len()).filter(|&i| !inputs[i].elem.is_zero()).collect();
    order.sort_by_key(|&i| (inputs[i].elem.degree(degrees).unwrap(), !inputs[i].hidden, i));

    // (degree, seq) -> (i, j)
    let mut pairs: BTreeMap<(i32, u64), (usize, usize)> = BTreeMap::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut seq = 0u64;
    let mut minimal = Vec::new();
    let mut next_input = 0;

    let add_pairs = |gb: &GroebnerBasis,
                     new: usize,
                     pairs: &mut BTreeMap<(i32, u64), (usize, usize)>,
                     pending: &mut HashSet<(usize, usize)>,
                     seq: &mut u64| {
        let t = gb.elems[new].terms[0];
        for &old in &gb.by_comp[t.comp as usize] {
            if old == new {
                continue;
            }
            let l = t.mono.lcm(&gb.elems[old].terms[0].mono, &weights);
            let d = l.degree() as i32 + gb.degrees[t.comp as usize];
            pairs.insert((d, *seq), (old, new));
            pending.insert((old, new));
            *seq += 1;
        }
    };

    loop {
        let pair_deg = pairs.keys().next().map(|k| k.0);
        let input_deg = order.get(next_input).map(|&i| inputs[i].elem.degree(degrees).unwrap());
        let take_pair = match (pair_deg, input_deg) {
            (None, None) => break,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(p), Some(i)) => p <= i,
        };
        if take_pair {
            let (&key, &(i, j)) = pairs.iter().next().unwrap();
            pairs.remove(&key);
            pending.remove(&(i, j));
            let ti = gb.elems[i].terms[0];
            let tj = gb.elems[j].terms[0];
            let l = ti.mono.lcm(&tj.mono, &weights);
            let chain = gb.by_comp[ti.comp as usize].iter().any(|&m| {
                m != i
                    && m != j
                    && gb.elems[m].terms[0].mono.divides(&l)
                    && !pending.contains(&(i.min(m), i.max(m)))
                    && !pending.contains(&(j.min(m), j.max(m)))
            });
            if chain {
                continue;
            }
            let s = s_vector(&k, &weights, &gb.elems[i], &gb.elems[j]).unwrap();
            let h = gb.normal_form(&s);
            if !h.is_zero() {
                let idx = gb.insert(h, limits)?;
                add_pairs(&gb, idx, &mut pairs, &mut pending, &mut seq);
            }
        } else {
            let i = order[next_input];
            next_input += 1;
            let h = gb.normal_form(&inputs[i].elem);
            if !h.is_zero() {
                let idx = gb.insert(h, limits)?;
                add_pairs(&gb, idx, &mut pairs, &mut pending, &mut seq);
                if !inputs[i].hidden {
                    minimal.push(i);
                }
            }
        }
    }
    gb.interreduce();
    minimal.sort_unstable();
    Ok(GbOutcome { basis: gb, minimal })
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub fn buchberger(ring: &PolyRing, degrees: &[i32], gens: &[ModElem], limits: &Limits) -> Result<GroebnerBasis> {
    let inputs: Vec<GbInput> = gens
        .iter()
        .map(|g| GbInput {
            elem: g.clone(),
            hidden: false,
        })
        .collect();
    Ok(compute(ring, degrees, &inputs, limits)?.basis)
}

/// The hidden generators `f·e_i` that realize the quotient `S/(f)`.
pub fn quotient_relations(f: &Polynomial, rank: usize) -> Vec<GbInput> {
    (0..rank)
        .map(|i| GbInput {
            elem: ModElem::scalar_basis(i, f),
            hidden: true,
        })
        .collect()
}

/// Gröbner basis whose normal forms are canonical representatives of
/// elements of `R^n / <gens>` with `R = S/(f)`.
pub fn gb_over_quotient(
    ring: &PolyRing,
    f: &Polynomial,
    degrees: &[i32],
    gens: &[ModElem],
    limits: &Limits,
) -> Result<GroebnerBasis> {
    let mut inputs = quotient_relations(f, degrees.len());
    inputs.extend(gens.iter().map(|g| GbInput {
        elem: g.clone(),
        hidden: false,
    }));
    Ok(compute(ring, degrees, &inputs, limits)?.basis)
}

pub fn normal_form(v: &ModElem, gb: &GroebnerBasis) -> ModElem {
    gb.normal_form(v)
}

fn check_homogeneous(degrees: &[i32], gens: &[ModElem], gen_degrees: &[i32]) -> Result<()> {
    for (g, &d) in gens.iter().zip(gen_degrees) {
        if !g.is_homogeneous(degrees) || g.degree(degrees).is_some_and(|gd| gd != d) {
            return Err(Error::NotHomogeneous(format!(
                "generator expected homogeneous of degree {d}"
            )));
        }
    }
    Ok(())
}

/// Generators of the syzygy module `{w : Σ w_i·gens_i ∈ f·S^n}` (or `= 0`
/// when `quotient` is `None`), as elements of the free module whose basis
/// vector `i` has degree `gen_degrees[i]`. The output is a Gröbner basis of
/// the syzygies over `S`; over `R` it still generates, and callers minimize.
pub fn syzygies(
    ring: &PolyRing,
    degrees: &[i32],
    gens: &[ModElem],
    gen_degrees: &[i32],
    quotient: Option<&Polynomial>,
    limits: &Limits,
) -> Result<Vec<ModElem>> {
    check_homogeneous(degrees, gens, gen_degrees)?;
    let n = degrees.len();
    let aug_degrees: Vec<i32> = degrees.iter().chain(gen_degrees).copied().collect();
    let mut inputs = match quotient {
        Some(f) => quotient_relations(f, n),
        None => Vec::new(),
    };
    for (i, g) in gens.iter().enumerate() {
        let e = g.add(ring.field(), &ModElem::basis(n + i));
        inputs.push(GbInput { elem: e, hidden: false });
    }
    let out = compute(ring, &aug_degrees, &inputs, limits)?;
    let syz: Vec<ModElem> = out
        .basis
        .elements()
        .iter()
        .filter(|e| e.terms[0].comp as usize >= n)
        .map(|e| e.restrict(n, n + gens.len()))
        .collect();
    Ok(syz)
}

/// Indices of a minimal generating subset of `gens` (homogeneous), modulo
/// `f·S^n` when `quotient` is given.
pub fn minimal_generators(
    ring: &PolyRing,
    degrees: &[i32],
    gens: &[ModElem],
    quotient: Option<&Polynomial>,
    limits: &Limits,
) -> Result<(Vec<usize>, GroebnerBasis)> {
    for g in gens {
        if !g.is_homogeneous(degrees) {
            return Err(Error::NotHomogeneous(
                "minimal generators need homogeneous input".into(),
            ));
        }
    }
    let mut inputs = match quotient {
        Some(f) => quotient_relations(f, degrees.len()),
        None => Vec::new(),
    };
    let offset = inputs.len();
    inputs.extend(gens.iter().map(|g| GbInput {
        elem: g.clone(),
        hidden: false,
    }));
    let out = compute(ring, degrees, &inputs, limits)?;
    let idx = out.minimal.into_iter().map(|i| i - offset).collect();
    Ok((idx, out.basis))
}

/// Expresses elements of a submodule as combinations of its generators.
pub struct Lifter {
    rank: usize,
    ngens: usize,
    gb: GroebnerBasis,
    field: PrimeField,
}

impl Lifter {
    pub fn new(
        ring: &PolyRing,
        degrees: &[i32],
        gens: &[ModElem],
        gen_degrees: &[i32],
        quotient: Option<&Polynomial>,
        limits: &Limits,
    ) -> Result<Self> {
        check_homogeneous(degrees, gens, gen_degrees)?;
        let n = degrees.len();
        let aug: Vec<i32> = degrees.iter().chain(gen_degrees).copied().collect();
        let mut inputs = match quotient {
            Some(f) => quotient_relations(f, n),
            None => Vec::new(),
        };
        for (i, g) in gens.iter().enumerate() {
            inputs.push(GbInput {
                elem: g.add(ring.field(), &ModElem::basis(n + i)),
                hidden: false,
            });
        }
        let gb = compute(ring, &aug, &inputs, limits)?.basis;
        Ok(Lifter {
            rank: n,
            ngens: gens.len(),
            gb,
            field: *ring.field(),
        })
    }

    /// Coefficients `c` with `v = Σ c_i gens_i` (mod `f`), or `None` when
    /// `v` is not in the span.
    pub fn lift(&self, v: &ModElem) -> Option<ModElem> {
        let r = self.gb.normal_form(v);
        if r.terms.first().is_some_and(|t| (t.comp as usize) < self.rank) {
            return None;
        }
        Some(
            r.restrict(self.rank, self.rank + self.ngens)
                .scale(&self.field, self.field.neg(1)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::standard(101).unwrap()
    }

    fn ideal(r: &PolyRing, gens: &[&str]) -> Vec<ModElem> {
        gens.iter()
            .map(|g| ModElem::scalar_basis(0, &r.parse(g).unwrap()))
            .collect()
    }

    fn polys(r: &PolyRing, gb: &GroebnerBasis) -> Vec<String> {
        gb.elements().iter().map(|e| r.format(&e.to_column(r, 1)[0])).collect()
    }

    #[test]
    fn monomial_ideal() {
        let r = ring();
        let gb = buchberger(&r, &[0], &ideal(&r, &["x", "y"]), &Limits::default()).unwrap();
        assert_eq!(polys(&r, &gb), vec!["x", "y"]);
        assert!(gb.is_reduced());
    }

    #[test]
    fn single_quadric() {
        let r = ring();
        let gb = buchberger(&r, &[0], &ideal(&r, &["x*y - z*w"]), &Limits::default()).unwrap();
        assert_eq!(polys(&r, &gb), vec!["x*y + 100*z*w"]);
    }

    #[test]
    fn twisted_cubic_weighted() {
        let r = PolyRing::new(
            PrimeField::new(101).unwrap(),
            ["x", "y", "z", "w"].map(String::from),
            [1, 2, 3, 1],
        )
        .unwrap();
        let gb = buchberger(&r, &[0], &ideal(&r, &["y - x^2", "z - x^3"]), &Limits::default()).unwrap();
        assert_eq!(gb.elements().len(), 3);
        let y2xz = ModElem::scalar_basis(0, &r.parse("y^2 - x*z").unwrap());
        assert!(gb.elements().contains(&y2xz));
        assert!(gb.is_confluent());
    }

    #[test]
    fn normal_forms_quadric() {
        let r = ring();
        let l = Limits::default();
        let gx = buchberger(&r, &[0], &ideal(&r, &["x"]), &l).unwrap();
        assert!(gx.normal_form(&ideal(&r, &["x^2"])[0]).is_zero());
        let g = buchberger(&r, &[0], &ideal(&r, &["x*y - z*w"]), &l).unwrap();
        let zw = ideal(&r, &["z*w"])[0].clone();
        assert_eq!(g.normal_form(&zw), zw);
        assert_eq!(g.normal_form(&ideal(&r, &["x*y"])[0]), zw);
    }

    #[test]
    fn quotient_membership() {
        let r = ring();
        let f = r.parse("x*y - z*w").unwrap();
        let l = Limits::default();
        let gb = gb_over_quotient(&r, &f, &[0], &ideal(&r, &["x"]), &l).unwrap();
        // zw ∈ (x) + (f)
        assert!(gb.normal_form(&ideal(&r, &["z*w"])[0]).is_zero());
        assert!(gb.normal_form(&ideal(&r, &["x*y - z*w"])[0]).is_zero());
        assert!(!gb.normal_form(&ideal(&r, &["z"])[0]).is_zero());
        let zero = gb_over_quotient(&r, &f, &[0], &[], &l).unwrap();
        assert_eq!(polys(&r, &zero), vec!["x*y + 100*z*w"]);
        let m = gb_over_quotient(&r, &f, &[0], &ideal(&r, &["x", "y", "z", "w"]), &l).unwrap();
        assert!(m.normal_form(&ModElem::scalar_basis(0, &f)).is_zero());
    }

    #[test]
    fn koszul_syzygy() {
        let r = ring();
        let l = Limits::default();
        let gens = ideal(&r, &["x", "y"]);
        let syz = syzygies(&r, &[0], &gens, &[1, 1], None, &l).unwrap();
        assert_eq!(syz.len(), 1);
        let col = syz[0].to_column(&r, 2);
        // y·x - x·y = 0, up to a unit
        assert_eq!(
            r.add(&r.mul(&col[0], &r.var(0)), &r.mul(&col[1], &r.var(1))),
            Polynomial::zero()
        );
        assert_eq!(col[0].len(), 1);
    }

    #[test]
    fn matrix_columns_syzygy_substitution() {
        let r = ring();
        let l = Limits::default();
        let a = [["y", "z"], ["-w", "-x"]];
        let cols: Vec<ModElem> = (0..2)
            .map(|j| ModElem::from_column(&[r.parse(a[0][j]).unwrap(), r.parse(a[1][j]).unwrap()]))
            .collect();
        // over S the square matrix with det -f ≠ 0 has no syzygies
        assert!(syzygies(&r, &[1, 1], &cols, &[2, 2], None, &l).unwrap().is_empty());
        // over R every syzygy must substitute to a multiple of f
        let f = r.parse("x*y - z*w").unwrap();
        let syz = syzygies(&r, &[1, 1], &cols, &[2, 2], Some(&f), &l).unwrap();
        assert!(!syz.is_empty());
        let fgb = gb_over_quotient(&r, &f, &[1, 1], &[], &l).unwrap();
        for s in &syz {
            let c = s.to_column(&r, 2);
            let mut acc = ModElem::zero();
            for (ci, g) in c.iter().zip(&cols) {
                acc = acc.add(r.field(), &g.mul_poly(&r, ci));
            }
            assert!(fgb.normal_form(&acc).is_zero());
        }
    }

    #[test]
    fn standard_monomial_counts() {
        let r = ring();
        let lt = |g: &[&str]| {
            let gb = buchberger(&r, &[0], &ideal(&r, g), &Limits::default()).unwrap();
            gb.lead_terms()
        };
        assert_eq!(lt(&["x", "y", "z", "w"]).std_monomial_count(), Count::Finite(1));
        assert_eq!(lt(&["x", "y", "z"]).std_monomial_count(), Count::Infinite);
        assert_eq!(lt(&["x^2", "y", "z", "w"]).std_monomial_count(), Count::Finite(2));
        assert_eq!(lt(&["x", "y", "z", "w"]).dimension(), 0);
        assert_eq!(lt(&["x", "z"]).dimension(), 2);
        assert_eq!(lt(&["x*y"]).dimension(), 3);
        assert_eq!(lt(&["1"]).dimension(), -1);
    }

    /// Independent check of `dimension`: the Hilbert function of S/(xy)
    /// grows like a quadratic, i.e. dimension 3.
    #[test]
    fn dimension_by_hilbert_growth() {
        let r = ring();
        let gb = buchberger(&r, &[0], &ideal(&r, &["x*y"]), &Limits::default()).unwrap();
        let h = gb.lead_terms().graded_counts(r.weights(), 12);
        // third finite difference of a degree-2 polynomial vanishes
        let d1: Vec<i64> = h.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect();
        let d2: Vec<i64> = d1.windows(2).map(|w| w[1] - w[0]).collect();
        let d3: Vec<i64> = d2.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(d2[4..].iter().all(|&v| v == d2[4] && v != 0));
        assert!(d3[4..].iter().all(|&v| v == 0));
        assert_eq!(gb.lead_terms().dimension(), 3);
    }

    #[test]
    fn minimal_generators_drop_redundant() {
        let r = ring();
        let gens = ideal(&r, &["x", "y", "x*y + x^2", "z"]);
        let (idx, _) = minimal_generators(&r, &[0], &gens, None, &Limits::default()).unwrap();
        assert_eq!(idx, vec![0, 1, 3]);
    }

    #[test]
    fn lifter_recovers_coefficients() {
        let r = ring();
        let gens = ideal(&r, &["x", "y"]);
        let lf = Lifter::new(&r, &[0], &gens, &[1, 1], None, &Limits::default()).unwrap();
        let v = ideal(&r, &["x*z + y*w"])[0].clone();
        let c = lf.lift(&v).unwrap().to_column(&r, 2);
        let back = r.add(&r.mul(&c[0], &r.var(0)), &r.mul(&c[1], &r.var(1)));
        assert_eq!(back, r.parse("x*z + y*w").unwrap());
        assert!(lf.lift(&ideal(&r, &["z"])[0]).is_none());
    }

    #[test]
    fn basis_ceiling_is_enforced() {
        let r = ring();
        let tight = Limits {
            max_basis: 1,
            ..Limits::default()
        };
        let err = buchberger(&r, &[0], &ideal(&r, &["x", "y"]), &tight).unwrap_err();
        assert!(matches!(err, Error::ResourceBound(_)));
    }
}
