//! Ring contexts: the ambient `S = F_p[x1..x4]` with a positive grading and
//! the hypersurface `R = S/(f)`.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::groebner::{buchberger, Limits, ModElem};
use crate::matrix::PolyMatrix;
use crate::poly::{PolyRing, Polynomial, WeightedDegree, NVARS};

/// Whether module computations happen over `S` or over `R = S/(f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    S,
    R,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::S => "S",
            Mode::R => "R",
        })
    }
}

/// A validated hypersurface `f` in four weighted variables, together with
/// the mode in which modules over this context are interpreted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingContext {
    ring: PolyRing,
    f: Polynomial,
    degree: u32,
    domain: bool,
    mode: Mode,
}

/// Output of [`RingContext::singularity_profile`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityProfile {
    pub isolated: bool,
    pub jacobian_dim: i32,
    /// Set when `p` divides an exponent of `f`, so formal partials may lose
    /// information and the Jacobian verdict is unreliable.
    pub warnings: Vec<String>,
}

impl RingContext {
    /// Validate `f` over `ring`; the context starts in mode `R`.
    pub fn new(ring: PolyRing, f: Polynomial, domain: bool) -> Result<Self> {
        ring.check_member(&f)?;
        if f.is_zero() {
            return Err(Error::InvalidRing("the hypersurface equation is zero".into()));
        }
        let degree = match ring.weighted_degree(&f)? {
            WeightedDegree::Homogeneous(d) => d,
            WeightedDegree::Mixed => {
                return Err(Error::NotHomogeneous(format!(
                    "f = {} is not weighted-homogeneous",
                    ring.format(&f)
                )))
            }
        };
        if let Some((m, _)) = f.terms().iter().find(|(m, _)| m.total_degree() < 2) {
            let what = if m.is_one() { "a constant" } else { "a linear" };
            return Err(Error::InvalidRing(format!(
                "f = {} has {what} term, so R would not be singular",
                ring.format(&f)
            )));
        }
        Ok(RingContext {
            ring,
            f,
            degree,
            domain,
            mode: Mode::R,
        })
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &PrimeField {
        self.ring.field()
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    /// Weighted degree of `f`.
    pub fn f_degree(&self) -> u32 {
        self.degree
    }

    /// User-asserted: `f` is irreducible, so `R` is a domain. Not verified.
    pub fn is_domain(&self) -> bool {
        self.domain
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn with_domain(&self, domain: bool) -> RingContext {
        RingContext { domain, ..self.clone() }
    }

    pub fn with_mode(&self, mode: Mode) -> RingContext {
        RingContext { mode, ..self.clone() }
    }

    /// The equation to append as hidden relations, if computing over `R`.
    pub fn quotient(&self) -> Option<&Polynomial> {
        match self.mode {
            Mode::R => Some(&self.f),
            Mode::S => None,
        }
    }

    /// Canonical text describing the ring (mode excluded).
    pub fn canonical_text(&self) -> String {
        let w = self.ring.weights();
        format!(
            "p={};vars={};weights={},{},{},{};f={};domain={}",
            self.field().characteristic(),
            self.ring.variables().join(","),
            w[0],
            w[1],
            w[2],
            w[3],
            self.ring.format(&self.f),
            self.domain
        )
    }

    /// Hex sha256 of [`canonical_text`](Self::canonical_text).
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }

    /// `g` reduced modulo `f` (a canonical representative in `R`).
    pub fn reduce(&self, g: &Polynomial) -> Polynomial {
        if self.mode == Mode::S {
            return g.clone();
        }
        // {monic f} is already a Gröbner basis of (f)
        let gb = buchberger(
            &self.ring,
            &[0],
            &[ModElem::scalar_basis(0, &self.f)],
            &Limits::default(),
        )
        .expect("a principal ideal basis never exceeds the limits");
        gb.normal_form(&ModElem::scalar_basis(0, g))
            .to_column(&self.ring, 1)
            .pop()
            .unwrap()
    }

    pub fn is_zero_in_ring(&self, g: &Polynomial) -> bool {
        self.reduce(g).is_zero()
    }

    /// Entrywise canonical representatives.
    pub fn reduce_matrix(&self, m: &PolyMatrix) -> PolyMatrix {
        m.map_entries(|e| self.reduce(e))
    }

    /// Jacobian criterion: `R` has an isolated singularity iff
    /// `(f, ∂f/∂x1, .., ∂f/∂x4)` has dimension zero.
    pub fn singularity_profile(&self, limits: &Limits) -> Result<SingularityProfile> {
        let p = self.field().characteristic() as u64;
        let mut warnings = Vec::new();
        let divides_exponent = self
            .f
            .terms()
            .iter()
            .any(|(m, _)| m.exponents().iter().any(|&e| e > 0 && (e as u64).is_multiple_of(p)));
        if divides_exponent {
            warnings.push(format!(
                "characteristic {p} divides an exponent of f; the Jacobian test may misreport"
            ));
        }
        let mut gens = vec![ModElem::scalar_basis(0, &self.f)];
        for i in 0..NVARS {
            let d = self.ring.derivative(&self.f, i);
            if !d.is_zero() {
                gens.push(ModElem::scalar_basis(0, &d));
            }
        }
        let gb = buchberger(&self.ring, &[0], &gens, limits)?;
        let jacobian_dim = gb.lead_terms().dimension();
        Ok(SingularityProfile {
            isolated: jacobian_dim <= 0,
            jacobian_dim,
            warnings,
        })
    }

    /// Krull dimension of `S/(f)` by lead terms; always 3 for a valid context.
    pub fn krull_dim(&self, limits: &Limits) -> Result<i32> {
        let gb = buchberger(&self.ring, &[0], &[ModElem::scalar_basis(0, &self.f)], limits)?;
        Ok(gb.lead_terms().dimension())
    }
}

/// Parse and validate a ring from its textual ingredients. The result is
/// asserted to be a domain; see [`RingContext::with_domain`].
pub fn make_ring(p: u64, variables: [&str; NVARS], weights: [u32; NVARS], f_text: &str) -> Result<RingContext> {
    let field = PrimeField::new(p)?;
    let ring = PolyRing::new(field, variables.map(String::from), weights)?;
    let f = ring.parse(f_text)?;
    RingContext::new(ring, f, true)
}

/// The same matrix read over `S`. Entries must already be reduced modulo
/// `f`, which [`RingContext::reduce_matrix`] guarantees.
pub fn lift_matrix(m: &PolyMatrix) -> PolyMatrix {
    m.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qc() -> RingContext {
        make_ring(101, ["x", "y", "z", "w"], [1, 1, 1, 1], "x*y - z*w").unwrap()
    }

    #[test]
    fn validation() {
        assert!(qc().mode() == Mode::R);
        let bad = make_ring(101, ["x", "y", "z", "w"], [1, 1, 1, 1], "x");
        assert!(matches!(bad, Err(Error::InvalidRing(_))));
        let mixed = make_ring(101, ["x", "y", "z", "w"], [1, 1, 1, 1], "x^2 + y^3");
        assert!(matches!(mixed, Err(Error::NotHomogeneous(_))));
        assert!(make_ring(91, ["x", "y", "z", "w"], [1, 1, 1, 1], "x*y").is_err());
        // a weighted linear term is still rejected
        let lin = make_ring(101, ["x", "y", "z", "w"], [2, 1, 1, 1], "x + y^2");
        assert!(matches!(lin, Err(Error::InvalidRing(_))));
    }

    #[test]
    fn brieskorn_degree() {
        let r = make_ring(32003, ["x", "y", "z", "w"], [105, 70, 42, 30], "x^2 + y^3 + z^5 + w^7").unwrap();
        assert_eq!(r.f_degree(), 210);
        let prof = r.singularity_profile(&Limits::default()).unwrap();
        assert!(prof.isolated);
        assert!(prof.warnings.is_empty());
    }

    #[test]
    fn profiles() {
        let l = Limits::default();
        assert!(qc().singularity_profile(&l).unwrap().isolated);
        assert_eq!(qc().singularity_profile(&l).unwrap().jacobian_dim, 0);
        let line = make_ring(101, ["x", "y", "z", "w"], [1, 1, 1, 1], "x^2*y").unwrap();
        let prof = line.singularity_profile(&l).unwrap();
        assert!(!prof.isolated);
        // (x^2 y, 2xy, x^2) = (x^2, xy) cuts out the hyperplane x = 0
        assert_eq!(prof.jacobian_dim, 3);
        let p3 = make_ring(3, ["x", "y", "z", "w"], [1, 1, 1, 1], "x^3 + y^3 + z^2*w").unwrap();
        assert_eq!(p3.singularity_profile(&l).unwrap().warnings.len(), 1);
    }

    #[test]
    fn ring_dimension_and_reduction() {
        let r = qc();
        assert_eq!(r.krull_dim(&Limits::default()).unwrap(), 3);
        assert!(r.is_zero_in_ring(r.f()));
        assert!(!r.is_zero_in_ring(&r.ring().one()));
        let xy = r.ring().parse("x*y").unwrap();
        assert_eq!(r.ring().format(&r.reduce(&xy)), "z*w");
    }

    #[test]
    fn lift_is_identity_on_reduced_matrices() {
        let r = qc();
        let a = PolyMatrix::parse_rows(r.ring(), &[&["y", "z"], &["-w", "-x"]]).unwrap();
        assert_eq!(lift_matrix(&r.reduce_matrix(&a)), a);
        let id = PolyMatrix::identity(r.ring(), 3);
        assert_eq!(lift_matrix(&id), id);
        let twice = r.reduce_matrix(&lift_matrix(&r.reduce_matrix(&a)));
        assert_eq!(twice, r.reduce_matrix(&a));
    }

    #[test]
    fn profile_invariant_under_variable_permutation() {
        let l = Limits::default();
        for text in ["x*y - z*w", "x^2*y", "x^2 + y^2 + z*w", "x^3 + y^3 + z^3 + w^3"] {
            let base = make_ring(101, ["x", "y", "z", "w"], [1, 1, 1, 1], "x*y").unwrap();
            let f = base.ring().parse(text).unwrap();
            let perm = [2, 0, 3, 1];
            let target = PolyRing::new(*base.field(), ["a", "b", "c", "d"].map(String::from), [1, 1, 1, 1]).unwrap();
            let g = base.ring().permute_into(&f, &perm, &target);
            let r1 = RingContext::new(base.ring().clone(), f.clone(), true);
            let r2 = RingContext::new(target, g, true);
            let (a, b) = (r1.unwrap(), r2.unwrap());
            assert_eq!(a.singularity_profile(&l).unwrap(), b.singularity_profile(&l).unwrap());
        }
    }
}
