//! The theta pairing `θ(M, N) = ℓ Tor_6(M, N) - ℓ Tor_5(M, N)` over `R`,
//! with a stabilization window, and the identity checks built on it.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::fpmod::{FPModule, ModuleMap};
use crate::hypersurface::Mode;
use crate::poly::Polynomial;
use crate::theorems::TheoremReport;

/// `e` in `θ = ℓ Tor_{2e+2} - ℓ Tor_{2e+1}`; the least value with `2e ≥ 3`.
pub const E_USED: usize = 2;
pub const DEFAULT_WINDOW: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaReport {
    pub left: String,
    pub right: String,
    /// `ℓ Tor_i(M, N)` for `i` in `4 ..= 6 + window`.
    pub tor_lengths: BTreeMap<usize, u64>,
    pub theta: i64,
    pub stabilized: bool,
    pub e_used: usize,
    pub window: usize,
}

impl ThetaReport {
    pub fn labelled(mut self, left: &str, right: &str) -> Self {
        self.left = left.to_string();
        self.right = right.to_string();
        self
    }
}

/// A short exact sequence `0 -> sub -> mid -> quot -> 0`.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub inj: ModuleMap,
    pub surj: ModuleMap,
}

impl ShortExact {
    pub fn sub(&self) -> &FPModule {
        &self.inj.source
    }

    pub fn mid(&self) -> &FPModule {
        &self.inj.target
    }

    pub fn quot(&self) -> &FPModule {
        &self.surj.target
    }
}

/// Turn an ineligibility error into an INELIGIBLE report; anything else
/// propagates.
fn ineligible_or(err: Error, report: TheoremReport) -> Result<TheoremReport> {
    match err {
        Error::Ineligible(why) => Ok(report.ineligible(why)),
        e => Err(e),
    }
}

impl Engine {
    /// Why `θ(M, -)` is defined: `R` has an isolated singularity or `M` is
    /// locally free on the punctured spectrum.
    pub fn theta_eligibility(&self, m: &FPModule) -> Result<()> {
        if m.ctx().mode() != Mode::R {
            return Err(Error::InvalidArgument("theta is defined over R, not S".into()));
        }
        if m.ctx().singularity_profile(self.limits())?.isolated {
            return Ok(());
        }
        if self.is_locally_free_on_punctured(m)?.0 {
            return Ok(());
        }
        Err(Error::Ineligible(
            "R is not an isolated singularity and M is not locally free on the punctured spectrum".into(),
        ))
    }

    pub fn theta(&self, m: &FPModule, n: &FPModule) -> Result<ThetaReport> {
        self.theta_with_window(m, n, DEFAULT_WINDOW)
    }

    /// Computes `ℓ Tor_i` for `i = 4 ..= 6 + window` from one resolution of
    /// `M`; stabilization requires `ℓ Tor_{j+2} = ℓ Tor_j` for `j ≥ 5`.
    pub fn theta_with_window(&self, m: &FPModule, n: &FPModule, window: usize) -> Result<ThetaReport> {
        m.check_same_ring(n)?;
        self.theta_eligibility(m)?;
        let low = 2 * E_USED;
        let high = 2 * E_USED + 2 + window;
        let res = self.resolve(m, high + 1)?;
        let mut tor_lengths = BTreeMap::new();
        for i in low..=high {
            let t = self.tor_from_resolution(&res, n, i)?;
            let l = t
                .length
                .finite()
                .ok_or_else(|| Error::Ineligible(format!("Tor_{i}(M, N) has infinite length")))?;
            tor_lengths.insert(i, l);
        }
        let odd = 2 * E_USED + 1;
        let stabilized = (odd..=high - 2).all(|j| tor_lengths[&(j + 2)] == tor_lengths[&j]);
        if !stabilized {
            return Err(Error::Engine(format!(
                "Tor lengths {tor_lengths:?} did not stabilize with period 2"
            )));
        }
        let theta = tor_lengths[&(odd + 1)] as i64 - tor_lengths[&odd] as i64;
        Ok(ThetaReport {
            left: "M".into(),
            right: "N".into(),
            tor_lengths,
            theta,
            stabilized,
            e_used: E_USED,
            window,
        })
    }

    /// `θ(M, N) = χ^S(M, N)` whenever `M ⊗ N` has finite length.
    pub fn theta_equals_chi_check(&self, m: &FPModule, n: &FPModule) -> Result<TheoremReport> {
        let report = TheoremReport::new("theta-chi");
        if !self.length(&m.tensor(n)?)?.is_finite() {
            return Ok(report.ineligible("M ⊗ N does not have finite length"));
        }
        let theta = match self.theta(m, n) {
            Ok(t) => t,
            Err(e) => return ineligible_or(e, report),
        };
        let chi = self.serre_chi_s(m, n)?;
        let report = report
            .measure("theta", json!(theta.theta))
            .measure("chi_s", json!(chi))
            .measure("tor_lengths", json!(theta.tor_lengths));
        Ok(if theta.theta == chi {
            report.pass()
        } else {
            report.violation(format!("theta = {} but chi_S = {chi}", theta.theta))
        })
    }

    /// `θ(M, B) = θ(M, A) + θ(M, C)` on a verified short exact sequence.
    pub fn theta_additivity_check(&self, m: &FPModule, ses: &ShortExact) -> Result<TheoremReport> {
        let report = TheoremReport::new("theta-additivity");
        let exact = self.check_short_exact(&ses.inj, &ses.surj)?;
        let report = report.measure("exactness", json!(exact));
        if !exact.exact() {
            return Ok(report.error(format!("the sequence is not exact: {exact:?}")));
        }
        let mut values = Vec::with_capacity(3);
        for part in [ses.sub(), ses.mid(), ses.quot()] {
            match self.theta(m, part) {
                Ok(t) => values.push(t.theta),
                Err(e) => return ineligible_or(e, report),
            }
        }
        let [a, b, c] = [values[0], values[1], values[2]];
        let report = report
            .measure("theta_sub", json!(a))
            .measure("theta_mid", json!(b))
            .measure("theta_quot", json!(c));
        Ok(if b == a + c {
            report.pass()
        } else {
            report.violation(format!("theta(M, mid) = {b} but the sum of the ends is {}", a + c))
        })
    }

    /// `θ(M, R/(g)) = 0` for a nonzero `g` in a domain.
    pub fn theta_principal_vanishing(&self, m: &FPModule, g: &Polynomial) -> Result<TheoremReport> {
        let ctx = m.ctx();
        let report = TheoremReport::new("principal-vanishing").input("g", ctx.ring().format(g));
        if ctx.is_zero_in_ring(g) {
            return Err(Error::InvalidArgument("g is zero in R".into()));
        }
        if !ctx.is_domain() {
            return Ok(report.ineligible("R is not asserted to be a domain, so g may be a zero divisor"));
        }
        let n = FPModule::cyclic(ctx, std::slice::from_ref(g))?;
        let theta = match self.theta(m, &n) {
            Ok(t) => t,
            Err(e) => return ineligible_or(e, report),
        };
        let report = report.measure("theta", json!(theta.theta));
        Ok(if theta.theta == 0 {
            report.pass()
        } else {
            report.violation(format!("theta(M, R/(g)) = {}", theta.theta))
        })
    }

    /// `M₁ = coker(d_2^T)`: the cokernel of `F_1^* -> F_2^*` for the
    /// minimal resolution of `M`.
    pub fn dual_syzygy_cokernel(&self, m: &FPModule) -> Result<FPModule> {
        let res = self.resolve(m, 2)?;
        let d2 = res
            .differential(2)
            .ok_or_else(|| Error::Engine("resolution shorter than two steps".into()))?;
        let degrees: Vec<i32> = res.degrees_at(2).unwrap_or_default().iter().map(|d| -d).collect();
        FPModule::new(m.ctx(), degrees, d2.transpose().columns())
    }

    /// `ℓ Ext^1(M, N) = ℓ Tor_1(M₁, N)` for `M` MCM without free summand.
    pub fn ext1_tor1_bridge_check(&self, m: &FPModule, n: &FPModule) -> Result<TheoremReport> {
        m.check_same_ring(n)?;
        let report = TheoremReport::new("ext1-tor1-bridge");
        if !self.is_mcm(m)? {
            return Ok(report.ineligible("M is not maximal Cohen-Macaulay"));
        }
        let res = self.resolve(m, 2)?;
        if res.rank(0) != res.rank(1) {
            return Ok(report.ineligible("M has a free summand"));
        }
        let m1 = self.dual_syzygy_cokernel(m)?;
        let ext = self.ext_module(m, n, 1)?.length;
        let tor = self.tor_module(&m1, n, 1)?.length;
        let (Some(e), Some(t)) = (ext.finite(), tor.finite()) else {
            return Ok(report.ineligible("Ext^1(M, N) or Tor_1(M1, N) has infinite length"));
        };
        let report = report.measure("ext1_length", json!(e)).measure("tor1_length", json!(t));
        Ok(if e == t {
            report.pass()
        } else {
            report.violation(format!("l Ext^1(M, N) = {e} but l Tor_1(M1, N) = {t}"))
        })
    }
}
