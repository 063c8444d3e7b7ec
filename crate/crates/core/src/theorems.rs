//! Executable checkers. Each one tests a stated implication on a single
//! input and separates "hypothesis fails" (INELIGIBLE) from "implication
//! fails" (VIOLATION).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::fpmod::{FPModule, ModuleMap};
use crate::hypersurface::{Mode, RingContext};
use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, PolyRing, Polynomial, NVARS};

pub const DEFAULT_SEED: u64 = 3_405_691_582;
pub const BOURBAKI_ATTEMPTS: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Violation,
    Ineligible,
    Error,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Violation => "VIOLATION",
            Verdict::Ineligible => "INELIGIBLE",
            Verdict::Error => "ERROR",
        })
    }
}

impl std::str::FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "PASS" => Ok(Verdict::Pass),
            "VIOLATION" => Ok(Verdict::Violation),
            "INELIGIBLE" => Ok(Verdict::Ineligible),
            "ERROR" => Ok(Verdict::Error),
            _ => Err(Error::InvalidArgument(format!("unknown verdict `{s}`"))),
        }
    }
}

/// Measured invariants and the verdict of one checker run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub inputs: BTreeMap<String, String>,
    pub measured: BTreeMap<String, Value>,
    pub verdict: Verdict,
    /// Why the verdict is not PASS, or the failing data on VIOLATION.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl TheoremReport {
    pub fn new(theorem: &str) -> Self {
        TheoremReport {
            theorem: theorem.to_string(),
            inputs: BTreeMap::new(),
            measured: BTreeMap::new(),
            verdict: Verdict::Pass,
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<String>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn measure(mut self, key: &str, value: Value) -> Self {
        self.measured.insert(key.to_string(), value);
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn pass(mut self) -> Self {
        self.verdict = Verdict::Pass;
        self
    }

    pub fn violation(mut self, witness: impl Into<String>) -> Self {
        self.verdict = Verdict::Violation;
        self.witness = Some(witness.into());
        self
    }

    pub fn ineligible(mut self, why: impl Into<String>) -> Self {
        self.verdict = Verdict::Ineligible;
        self.witness = Some(why.into());
        self
    }

    pub fn error(mut self, why: impl Into<String>) -> Self {
        self.verdict = Verdict::Error;
        self.witness = Some(why.into());
        self
    }
}

/// Result of a successful Bourbaki construction `0 -> F -> M -> C -> 0`.
#[derive(Clone, Debug)]
pub struct Bourbaki {
    pub rank: usize,
    /// The seed of the attempt that succeeded.
    pub seed: u64,
    pub attempts: u64,
    /// `F = R^{r-1} -> M`.
    pub map: ModuleMap,
    pub cokernel: FPModule,
    pub cokernel_free: bool,
    /// Generators of an ideal isomorphic to `C`.
    pub ideal: Vec<Polynomial>,
}

/// All monomials of weighted degree `d`.
pub fn monomials_of_degree(ring: &PolyRing, d: i32) -> Vec<Monomial> {
    fn go(w: &[u32; NVARS], i: usize, left: u32, exps: &mut [u16; NVARS], out: &mut Vec<[u16; NVARS]>) {
        if i == NVARS - 1 {
            if left.is_multiple_of(w[i]) {
                exps[i] = (left / w[i]) as u16;
                out.push(*exps);
            }
            return;
        }
        for e in 0..=left / w[i] {
            exps[i] = e as u16;
            go(w, i + 1, left - e * w[i], exps, out);
        }
        exps[i] = 0;
    }
    if d < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(ring.weights(), 0, d as u32, &mut [0; NVARS], &mut out);
    out.into_iter().map(|e| ring.monomial(e)).collect()
}

fn random_form(ring: &PolyRing, d: i32, rng: &mut ChaCha8Rng) -> Polynomial {
    let p = ring.field().characteristic();
    let terms = monomials_of_degree(ring, d)
        .into_iter()
        .map(|m| (m, rng.gen_range(0..p)))
        .collect();
    ring.from_terms(terms)
}

fn ineligible_or(err: Error, report: TheoremReport) -> Result<TheoremReport> {
    match err {
        Error::Ineligible(why) => Ok(report.ineligible(why)),
        e => Err(e),
    }
}

fn require_r(m: &FPModule) -> Result<()> {
    if m.ctx().mode() != Mode::R {
        return Err(Error::InvalidArgument("checkers work over R".into()));
    }
    Ok(())
}

impl Engine {
    /// `pd_R N < ∞` iff `F_4 = 0` in the minimal resolution over `R`.
    pub fn has_finite_pd(&self, n: &FPModule) -> Result<bool> {
        let res = self.resolve(n, 4)?;
        Ok(res.rank(4) == Some(0))
    }

    /// If `θ(N*, N) = 0`, then `Hom(N, N)` is MCM only when `N` is free.
    pub fn check_endo_mcm(&self, n: &FPModule) -> Result<TheoremReport> {
        require_r(n)?;
        let report = TheoremReport::new("endo-mcm");
        if !self.biduality_defect(n)?.reflexive() {
            return Ok(report.ineligible("N is not reflexive"));
        }
        if !self.is_locally_free_on_punctured(n)?.0 {
            return Ok(report.ineligible("N is not locally free on the punctured spectrum"));
        }
        let hom = self.hom_module(n, n)?.module;
        let hom_min = self.minimal_presentation(&hom)?;
        let depth = self.depth(&hom)?;
        let (free, _) = self.is_free(n)?;
        let dual = self.dual(n)?.module;
        let theta = match self.theta(&dual, n) {
            Ok(t) => t.theta,
            Err(e) => return ineligible_or(e, report),
        };
        let report = report
            .measure("hom_generators", json!(hom_min.ngens()))
            .measure("hom_relations", json!(hom_min.nrels()))
            .measure("depth_hom", json!(depth))
            .measure("free", json!(free))
            .measure("theta_dual", json!(theta));
        let hom_mcm_nonfree = depth == 3 && !free;
        let report = if hom_mcm_nonfree {
            report.note("Hom(N, N) is MCM and N is not free, so theta(N*, N) must be nonzero")
        } else {
            report
        };
        Ok(if theta == 0 && hom_mcm_nonfree {
            report.violation("theta(N*, N) = 0, Hom(N, N) is MCM, and N is not free")
        } else {
            report.pass()
        })
    }

    /// Under `θ(M*, N) = 0`: `Ext^1(M, N) = 0` forces `M` free or
    /// `pd_R N < ∞`.
    pub fn check_rigidity(&self, m: &FPModule, n: &FPModule) -> Result<TheoremReport> {
        require_r(m)?;
        m.check_same_ring(n)?;
        let report = TheoremReport::new("rigidity");
        if !self.is_mcm(m)? {
            return Ok(report.ineligible("M is not maximal Cohen-Macaulay"));
        }
        if !self.is_locally_free_on_punctured(m)?.0 {
            return Ok(report.ineligible("M is not locally free on the punctured spectrum"));
        }
        let dual = self.dual(m)?.module;
        let theta = match self.theta(&dual, n) {
            Ok(t) => t.theta,
            Err(e) => return ineligible_or(e, report),
        };
        let report = report.measure("theta_dual", json!(theta));
        if theta != 0 {
            return Ok(report.ineligible(format!("theta(M*, N) = {theta} is nonzero")));
        }
        let ext1 = self.ext_module(m, n, 1)?.length;
        let Some(ext1) = ext1.finite() else {
            return Ok(report.ineligible("Ext^1(M, N) has infinite length"));
        };
        let (free, _) = self.is_free(m)?;
        let finite_pd = self.has_finite_pd(n)?;
        let report = report
            .measure("ext1_length", json!(ext1))
            .measure("m_free", json!(free))
            .measure("n_finite_pd", json!(finite_pd));
        if ext1 != 0 {
            return Ok(report
                .note("Ext^1(M, N) is nonzero; the implication holds vacuously")
                .pass());
        }
        Ok(if free || finite_pd {
            report.pass()
        } else {
            report.violation("Ext^1(M, N) = 0 with M not free and pd N infinite")
        })
    }

    /// The `n = 2` instance: `Hom(M, N)` MCM forces `Ext^1(M, N) = 0`.
    pub fn check_hom_ext_vanishing(&self, m: &FPModule, n: &FPModule) -> Result<TheoremReport> {
        require_r(m)?;
        m.check_same_ring(n)?;
        let report = TheoremReport::new("hom-ext-vanishing");
        if !self.is_locally_free_on_punctured(m)?.0 {
            return Ok(report.ineligible("M is not locally free on the punctured spectrum"));
        }
        let depth_n = self.depth(n)?;
        let report = report.measure("depth_n", json!(depth_n));
        if depth_n < 2 {
            return Ok(report.ineligible("depth N < 2"));
        }
        let hom = self.hom_module(m, n)?.module;
        if self.minimal_presentation(&hom)?.ngens() == 0 {
            return Ok(report.ineligible("Hom(M, N) is zero"));
        }
        let depth_hom = self.depth(&hom)?;
        let ext1 = self.ext_module(m, n, 1)?.length;
        let report = report
            .measure("depth_hom", json!(depth_hom))
            .measure("ext1_length", json!(ext1.finite()));
        Ok(if depth_hom == 3 && ext1.finite() != Some(0) {
            report.violation("Hom(M, N) is MCM but Ext^1(M, N) is nonzero")
        } else {
            report.pass()
        })
    }

    /// Randomized Bourbaki sequence `0 -> R^{r-1} -> M -> C -> 0` with
    /// `C` torsion-free of rank one and its ideal avoiding each of `avoid`.
    pub fn bourbaki(&self, m: &FPModule, avoid: &[Vec<Polynomial>], seed: u64) -> Result<Bourbaki> {
        require_r(m)?;
        let ctx = m.ctx();
        if !ctx.is_domain() {
            return Err(Error::Ineligible("R is not asserted to be a domain".into()));
        }
        let m = self.minimal_presentation(m)?;
        if !self.biduality_defect(&m)?.kernel_zero {
            return Err(Error::Ineligible("M has torsion".into()));
        }
        let r = self.generic_rank(&m)?;
        if r == 0 {
            return Err(Error::Ineligible("M has generic rank 0".into()));
        }
        let top = m.gen_degrees().iter().copied().max().unwrap_or(0);
        let mut tried = Vec::new();
        for attempt in 0..BOURBAKI_ATTEMPTS {
            let s = seed.wrapping_add(attempt);
            tried.push(s);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let cols: Vec<Vec<Polynomial>> = (0..r - 1)
                .map(|_| {
                    m.gen_degrees()
                        .iter()
                        .map(|&g| ctx.reduce(&random_form(ctx.ring(), top - g, &mut rng)))
                        .collect()
                })
                .collect();
            if let Some(found) = self.bourbaki_attempt(&m, ctx, cols, r, top, avoid)? {
                return Ok(Bourbaki {
                    seed: s,
                    attempts: attempt + 1,
                    ..found
                });
            }
        }
        Err(Error::RetriesExhausted(format!(
            "Bourbaki sequence; seeds tried {tried:?}"
        )))
    }

    fn bourbaki_attempt(
        &self,
        m: &FPModule,
        ctx: &RingContext,
        cols: Vec<Vec<Polynomial>>,
        r: usize,
        top: i32,
        avoid: &[Vec<Polynomial>],
    ) -> Result<Option<Bourbaki>> {
        let free = FPModule::free(ctx, vec![top; r - 1]);
        let matrix = PolyMatrix::from_columns(m.ngens(), cols);
        let map = ModuleMap::new(&free, m, matrix, 0)?;
        if !self.is_injective(&map)? {
            return Ok(None);
        }
        let c = self.minimal_presentation(&self.cokernel(&map)?)?;
        if self.generic_rank(&c)? != 1 || !self.biduality_defect(&c)?.kernel_zero {
            return Ok(None);
        }
        let functionals = self.dual(&c)?.maps;
        let Some(phi) = functionals.iter().find(|f| !f.is_zero()) else {
            return Ok(None);
        };
        let ideal: Vec<Polynomial> = (0..phi.cols()).map(|j| phi.get(0, j).clone()).collect();
        for p in avoid {
            let mut outside = false;
            for g in &ideal {
                if !self.ideal_contains(ctx, p, g)? {
                    outside = true;
                    break;
                }
            }
            if !outside {
                return Ok(None);
            }
        }
        let cokernel_free = self.is_free(&c)?.0;
        Ok(Some(Bourbaki {
            rank: r,
            seed: 0,
            attempts: 0,
            map,
            cokernel: c,
            cokernel_free,
            ideal,
        }))
    }

    pub fn bourbaki_report(&self, m: &FPModule, avoid: &[Vec<Polynomial>], seed: u64) -> Result<TheoremReport> {
        let report = TheoremReport::new("bourbaki").input("seed", seed.to_string());
        match self.bourbaki(m, avoid, seed) {
            Ok(b) => {
                let ring = m.ctx().ring();
                Ok(report
                    .measure("rank", json!(b.rank))
                    .measure("seed_used", json!(b.seed))
                    .measure("attempts", json!(b.attempts))
                    .measure("cokernel_free", json!(b.cokernel_free))
                    .measure("cokernel_generators", json!(b.cokernel.ngens()))
                    .measure(
                        "ideal",
                        json!(b.ideal.iter().map(|g| ring.format(g)).collect::<Vec<_>>()),
                    )
                    .pass())
            }
            Err(Error::RetriesExhausted(why)) => Ok(report.error(why)),
            Err(e) => ineligible_or(e, report),
        }
    }

    /// Any nonzero θ certifies that `R` is not a UFD; all zeros prove
    /// nothing.
    pub fn ufd_theta_probe(
        &self,
        ctx: &RingContext,
        pairs: &[(&str, &FPModule, &str, &FPModule)],
    ) -> Result<TheoremReport> {
        let report = TheoremReport::new("ufd-probe").input("pairs", pairs.len().to_string());
        if !ctx.singularity_profile(self.limits())?.isolated {
            return Ok(report.ineligible("R does not have an isolated singularity"));
        }
        let mut values = BTreeMap::new();
        let mut skipped = Vec::new();
        for &(a, m, b, n) in pairs {
            let key = format!("{a},{b}");
            match self.theta(m, n) {
                Ok(t) => {
                    values.insert(key, t.theta);
                }
                Err(Error::Ineligible(why)) => skipped.push(format!("({key}): {why}")),
                Err(e) => return Err(e),
            }
        }
        let nonzero = values.values().any(|&t| t != 0);
        let conclusion = if nonzero {
            "not a UFD: the class group is not torsion"
        } else if values.is_empty() {
            "consistent with UFD (vacuous)"
        } else {
            "consistent with UFD"
        };
        let mut report = report
            .measure("theta", json!(values))
            .measure("conclusion", json!(conclusion));
        for s in skipped {
            report = report.note(format!("skipped ineligible pair {s}"));
        }
        Ok(report.pass())
    }
}
