//! Finitely presented graded modules over `S` or `R`.
//!
//! A module is `coker(F1 -> F0)` for a homogeneous presentation matrix whose
//! rows are the generators. Over `R` the hidden relations `f·e_i` are implied
//! and never stored; stored entries are always reduced modulo `f`.

use serde::Serialize;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::groebner::{self, compute, quotient_relations, Count, GbInput, GroebnerBasis, ModElem};
use crate::hypersurface::{Mode, RingContext};
use crate::matrix::PolyMatrix;
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPModule {
    ctx: RingContext,
    gen_degrees: Vec<i32>,
    presentation: PolyMatrix,
}

impl FPModule {
    /// Build from relation columns over the generators' free module.
    /// Entries are reduced mod `f` over `R`; zero columns are dropped.
    pub fn new(ctx: &RingContext, gen_degrees: Vec<i32>, relations: Vec<Vec<Polynomial>>) -> Result<Self> {
        let n = gen_degrees.len();
        let mut elems = Vec::with_capacity(relations.len());
        for (j, col) in relations.iter().enumerate() {
            if col.len() != n {
                return Err(Error::Semantic(format!(
                    "relation {} has {} entries, expected {n}",
                    j + 1,
                    col.len()
                )));
            }
            let mut reduced = Vec::with_capacity(n);
            for p in col {
                ctx.ring().check_member(p)?;
                reduced.push(ctx.reduce(p));
            }
            let e = ModElem::from_column(&reduced);
            if e.is_zero() {
                continue;
            }
            if !e.is_homogeneous(&gen_degrees) {
                let deg = e.degree(&gen_degrees).unwrap();
                let bad = reduced
                    .iter()
                    .enumerate()
                    .find(|(i, p)| {
                        !p.is_zero()
                            && (!p.is_homogeneous()
                                || p.homogeneous_degree().map(|d| d as i32 + gen_degrees[*i]) != Some(deg))
                    })
                    .map(|(i, p)| format!("entry {} `{}`", i + 1, ctx.ring().format(p)))
                    .unwrap_or_default();
                return Err(Error::NotHomogeneous(format!(
                    "relation {} is not homogeneous: {bad}",
                    j + 1
                )));
            }
            elems.push(e);
        }
        Ok(Self::from_elems(ctx, gen_degrees, elems))
    }

    /// Trusted constructor: elements are homogeneous, reduced and nonzero.
    pub(crate) fn from_elems(ctx: &RingContext, gen_degrees: Vec<i32>, rels: Vec<ModElem>) -> Self {
        let n = gen_degrees.len();
        let col_degrees: Vec<i32> = rels.iter().map(|e| e.degree(&gen_degrees).unwrap()).collect();
        let cols: Vec<Vec<Polynomial>> = rels.iter().map(|e| e.to_column(ctx.ring(), n)).collect();
        let presentation = PolyMatrix::from_columns(n, cols).with_degrees_unchecked(gen_degrees.clone(), col_degrees);
        FPModule {
            ctx: ctx.clone(),
            gen_degrees,
            presentation,
        }
    }

    pub fn free(ctx: &RingContext, degrees: Vec<i32>) -> Self {
        Self::from_elems(ctx, degrees, Vec::new())
    }

    /// `R^n` (or `S^n`) generated in degree zero.
    pub fn free_rank(ctx: &RingContext, n: usize) -> Self {
        Self::free(ctx, vec![0; n])
    }

    pub fn zero(ctx: &RingContext) -> Self {
        Self::free(ctx, Vec::new())
    }

    /// The cyclic module `R/(gens)`.
    pub fn cyclic(ctx: &RingContext, gens: &[Polynomial]) -> Result<Self> {
        Self::new(ctx, vec![0], gens.iter().map(|g| vec![g.clone()]).collect())
    }

    /// `k = R/m`.
    pub fn residue_field(ctx: &RingContext) -> Self {
        let vars: Vec<Polynomial> = (0..4).map(|i| ctx.ring().var(i)).collect();
        Self::cyclic(ctx, &vars).expect("variables are homogeneous")
    }

    pub fn ctx(&self) -> &RingContext {
        &self.ctx
    }

    pub fn ngens(&self) -> usize {
        self.gen_degrees.len()
    }

    pub fn gen_degrees(&self) -> &[i32] {
        &self.gen_degrees
    }

    pub fn presentation(&self) -> &PolyMatrix {
        &self.presentation
    }

    pub fn nrels(&self) -> usize {
        self.presentation.cols()
    }

    pub fn relation_degrees(&self) -> &[i32] {
        self.presentation.col_degrees().unwrap_or(&[])
    }

    pub fn relation_elems(&self) -> Vec<ModElem> {
        self.presentation
            .columns()
            .iter()
            .map(|c| ModElem::from_column(c))
            .collect()
    }

    /// Relations including the hidden `f·e_i` when over `R`.
    pub(crate) fn full_relation_inputs(&self) -> Vec<GbInput> {
        let mut inputs = match self.ctx.quotient() {
            Some(f) => quotient_relations(f, self.ngens()),
            None => Vec::new(),
        };
        inputs.extend(
            self.relation_elems()
                .into_iter()
                .map(|elem| GbInput { elem, hidden: false }),
        );
        inputs
    }

    /// Reinterpret in another mode. Passing to `S` makes `f·e_i` explicit;
    /// passing to `R` reduces entries modulo `f`.
    pub fn with_mode(&self, mode: Mode) -> FPModule {
        if mode == self.ctx.mode() {
            return self.clone();
        }
        let ctx = self.ctx.with_mode(mode);
        match mode {
            Mode::S => {
                let mut rels = self.relation_elems();
                let f = self.ctx.f().clone();
                rels.extend((0..self.ngens()).map(|i| ModElem::scalar_basis(i, &f)));
                Self::from_elems(&ctx, self.gen_degrees.clone(), rels)
            }
            Mode::R => {
                let cols = self.presentation.columns();
                Self::new(&ctx, self.gen_degrees.clone(), cols).expect("reduction keeps homogeneity")
            }
        }
    }

    pub fn check_same_ring(&self, other: &FPModule) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::RingMismatch("modules live over different rings or modes".into()));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &FPModule) -> Result<FPModule> {
        self.check_same_ring(other)?;
        let n = self.ngens();
        let mut degrees = self.gen_degrees.clone();
        degrees.extend_from_slice(&other.gen_degrees);
        let mut rels = self.relation_elems();
        rels.extend(other.relation_elems().iter().map(|e| e.shifted(n)));
        Ok(Self::from_elems(&self.ctx, degrees, rels))
    }

    /// Twist: generator degrees shifted by `s`.
    pub fn twist(&self, s: i32) -> FPModule {
        let degrees = self.gen_degrees.iter().map(|d| d + s).collect();
        Self::from_elems(&self.ctx, degrees, self.relation_elems())
    }

    /// `M ⊗ N`, generator `(a, b)` at index `a·ngens(N) + b`, relations
    /// `[rel_M ⊗ 1 | 1 ⊗ rel_N]`.
    pub fn tensor(&self, other: &FPModule) -> Result<FPModule> {
        self.check_same_ring(other)?;
        let (m, n) = (self.ngens(), other.ngens());
        let mut degrees = Vec::with_capacity(m * n);
        for a in 0..m {
            for b in 0..n {
                degrees.push(self.gen_degrees[a] + other.gen_degrees[b]);
            }
        }
        let mut rels = Vec::new();
        for col in self.presentation.columns() {
            for b in 0..n {
                let mut v = vec![Polynomial::zero(); m * n];
                for a in 0..m {
                    v[a * n + b] = col[a].clone();
                }
                rels.push(ModElem::from_column(&v));
            }
        }
        for col in other.presentation.columns() {
            for a in 0..m {
                rels.push(ModElem::from_column_at(&col, a * n));
            }
        }
        Ok(Self::from_elems(&self.ctx, degrees, rels))
    }

    /// Canonical text of the presentation, used for cache keys.
    pub fn canonical_text(&self) -> String {
        let ring = self.ctx.ring();
        let mut s = format!("mode={};gendegs=", self.ctx.mode());
        s.push_str(&join(self.gen_degrees.iter()));
        for col in self.presentation.columns() {
            s.push_str(";rel=");
            let parts: Vec<String> = col.iter().map(|p| ring.format(p)).collect();
            s.push_str(&parts.join(","));
        }
        s
    }
}

fn join<T: std::fmt::Display>(it: impl Iterator<Item = T>) -> String {
    it.map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// A homogeneous map between presented modules. Column `j` of `matrix` is
/// the image of source generator `j` in target coordinates; the map raises
/// degrees by `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: FPModule,
    pub target: FPModule,
    pub matrix: PolyMatrix,
    pub degree: i32,
}

impl ModuleMap {
    pub fn new(source: &FPModule, target: &FPModule, matrix: PolyMatrix, degree: i32) -> Result<Self> {
        source.check_same_ring(target)?;
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::Semantic(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens()
            )));
        }
        let ctx = source.ctx();
        let matrix = ctx.reduce_matrix(&matrix);
        let cols: Vec<i32> = source.gen_degrees().iter().map(|d| d + degree).collect();
        let matrix = matrix.with_degrees(target.gen_degrees().to_vec(), cols)?;
        Ok(ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix,
            degree,
        })
    }

    pub(crate) fn image_elems(&self) -> Vec<ModElem> {
        self.matrix.columns().iter().map(|c| ModElem::from_column(c)).collect()
    }
}

/// A presentation with unit pivots eliminated and relations minimized, plus
/// how the original generators map into it.
#[derive(Clone, Debug)]
pub struct Minimized {
    pub module: FPModule,
    /// Original index of each surviving generator.
    pub kept: Vec<usize>,
    /// Each original generator written in the surviving generators.
    pub reexpress: Vec<ModElem>,
}

/// `span(gens) / (span(gens) ∩ span(rels))` presented on a minimal subset.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub module: FPModule,
    /// Ambient vector of each generator of `module`.
    pub gens: Vec<ModElem>,
}

/// `Hom(M, N)` with each generator decoded as a map.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub module: FPModule,
    /// Generator `k` as a `ngens(N) x ngens(M)` matrix in the given
    /// presentations of `M` and `N`.
    pub maps: Vec<PolyMatrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BidualityDefect {
    pub kernel_zero: bool,
    pub cokernel_zero: bool,
}

impl BidualityDefect {
    pub fn reflexive(&self) -> bool {
        self.kernel_zero && self.cokernel_zero
    }
}

/// Outcome of [`Engine::check_short_exact`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessCheck {
    pub maps_defined: bool,
    pub injective: bool,
    pub surjective: bool,
    pub composite_zero: bool,
    pub middle_exact: bool,
}

impl ExactnessCheck {
    pub fn exact(&self) -> bool {
        self.maps_defined && self.injective && self.surjective && self.composite_zero && self.middle_exact
    }
}

impl Engine {
    fn require_domain(&self, ctx: &RingContext) -> Result<()> {
        if !ctx.is_domain() {
            return Err(Error::Ineligible(
                "R is not asserted to be a domain (set `domain = yes`)".into(),
            ));
        }
        Ok(())
    }

    /// Gröbner basis of all relations of `m` (hidden ones included).
    pub fn relation_basis(&self, m: &FPModule) -> Result<GroebnerBasis> {
        Ok(compute(
            m.ctx().ring(),
            m.gen_degrees(),
            &m.full_relation_inputs(),
            self.limits(),
        )?
        .basis)
    }

    /// Unit-pivot elimination (first unit in row-major order) alternated
    /// with relation minimization, to a fixpoint.
    pub fn minimize(&self, m: &FPModule) -> Result<Minimized> {
        let ctx = m.ctx();
        let ring = ctx.ring();
        let k = ctx.field();
        let mut degrees = m.gen_degrees().to_vec();
        let mut alive: Vec<usize> = (0..m.ngens()).collect();
        let mut reexpress: Vec<ModElem> = (0..m.ngens()).map(ModElem::basis).collect();
        let mut cols: Vec<Vec<Polynomial>> = m.presentation().columns();
        loop {
            let mut pivot = None;
            'scan: for i in 0..degrees.len() {
                for (j, col) in cols.iter().enumerate() {
                    if let Some(c) = col[i].constant_value().filter(|&c| c != 0) {
                        pivot = Some((i, j, c));
                        break 'scan;
                    }
                }
            }
            let Some((i, j, c)) = pivot else {
                break;
            };
            let pcol = cols.remove(j);
            let cinv = k.inv(c);
            for col in cols.iter_mut() {
                if col[i].is_zero() {
                    continue;
                }
                let a = ring.scale(&col[i], k.neg(cinv));
                for r in 0..col.len() {
                    let t = ring.mul(&a, &pcol[r]);
                    col[r] = ctx.reduce(&ring.add(&col[r], &t));
                }
                debug_assert!(col[i].is_zero());
            }
            // e_i = -(1/c) Σ_{r≠i} pcol[r] e_r
            let mut sub: Vec<Polynomial> = pcol.iter().map(|p| ring.scale(p, k.neg(cinv))).collect();
            sub[i] = Polynomial::zero();
            let sub = ModElem::from_column(&sub);
            for v in reexpress.iter_mut() {
                let coeff = v.column_slice(ring, i, 1).pop().unwrap();
                let without = v.drop_component(i);
                *v = if coeff.is_zero() {
                    without
                } else {
                    without.add(k, &sub.mul_poly(ring, &coeff).drop_component(i))
                };
            }
            for col in cols.iter_mut() {
                col.remove(i);
            }
            degrees.remove(i);
            alive.remove(i);
            cols.retain(|c| c.iter().any(|p| !p.is_zero()));
        }
        let elems: Vec<ModElem> = cols.iter().map(|c| ModElem::from_column(c)).collect();
        let (idx, _) = groebner::minimal_generators(ring, &degrees, &elems, ctx.quotient(), self.limits())?;
        let rels: Vec<ModElem> = idx.into_iter().map(|i| elems[i].clone()).collect();
        let reexpress = reexpress
            .into_iter()
            .map(|v| reduce_elem(ctx, &v, degrees.len()))
            .collect();
        Ok(Minimized {
            module: FPModule::from_elems(ctx, degrees, rels),
            kept: alive,
            reexpress,
        })
    }

    pub fn minimal_presentation(&self, m: &FPModule) -> Result<FPModule> {
        Ok(self.minimize(m)?.module)
    }

    /// `(free, rank)`: free iff the minimal presentation has no relations.
    pub fn is_free(&self, m: &FPModule) -> Result<(bool, usize)> {
        let mm = self.minimal_presentation(m)?;
        Ok((mm.nrels() == 0, if mm.nrels() == 0 { mm.ngens() } else { 0 }))
    }

    /// Present `(span(gens) + B) / B` with `B = span(rels)` (plus `f·F` over
    /// `R`) inside the free module with component degrees `degrees`.
    pub fn subquotient(
        &self,
        ctx: &RingContext,
        degrees: &[i32],
        gens: &[ModElem],
        rels: &[ModElem],
    ) -> Result<Subquotient> {
        let ring = ctx.ring();
        let mut inputs = match ctx.quotient() {
            Some(f) => quotient_relations(f, degrees.len()),
            None => Vec::new(),
        };
        inputs.extend(rels.iter().filter(|r| !r.is_zero()).map(|r| GbInput {
            elem: r.clone(),
            hidden: true,
        }));
        let offset = inputs.len();
        inputs.extend(gens.iter().map(|g| GbInput {
            elem: g.clone(),
            hidden: false,
        }));
        let out = compute(ring, degrees, &inputs, self.limits())?;
        let t: Vec<ModElem> = out.minimal.iter().map(|&i| gens[i - offset].clone()).collect();
        let t_deg: Vec<i32> = t.iter().map(|e| e.degree(degrees).unwrap()).collect();
        if t.is_empty() {
            return Ok(Subquotient {
                module: FPModule::zero(ctx),
                gens: t,
            });
        }
        let nz_rels: Vec<ModElem> = rels.iter().filter(|r| !r.is_zero()).cloned().collect();
        let mut all = t.clone();
        all.extend(nz_rels.iter().cloned());
        let mut all_deg = t_deg.clone();
        all_deg.extend(nz_rels.iter().map(|r| r.degree(degrees).unwrap()));
        let syz = groebner::syzygies(ring, degrees, &all, &all_deg, ctx.quotient(), self.limits())?;
        let projected: Vec<ModElem> = syz
            .iter()
            .map(|s| reduce_elem(ctx, &s.restrict(0, t.len()), t.len()))
            .filter(|s| !s.is_zero())
            .collect();
        let (idx, _) = groebner::minimal_generators(ring, &t_deg, &projected, ctx.quotient(), self.limits())?;
        let rels: Vec<ModElem> = idx.into_iter().map(|i| projected[i].clone()).collect();
        Ok(Subquotient {
            module: FPModule::from_elems(ctx, t_deg, rels),
            gens: t,
        })
    }

    /// Homology at `P` of `O --psi--> P --phi--> Q` where `P`, `Q` are
    /// cokernels of `p_rels`, `q_rels` on free modules with degrees
    /// `p_deg`, `q_deg`. `phi[j]` is the image of the `j`-th basis vector
    /// of `P`; `psi` lists images in `P`.
    #[allow(clippy::too_many_arguments)]
    pub fn homology(
        &self,
        ctx: &RingContext,
        p_deg: &[i32],
        q_deg: &[i32],
        phi: &[ModElem],
        q_rels: &[ModElem],
        psi: &[ModElem],
        p_rels: &[ModElem],
    ) -> Result<Subquotient> {
        let kernel = self.preimage_generators(ctx, p_deg, q_deg, phi, q_rels)?;
        let mut b: Vec<ModElem> = psi.to_vec();
        b.extend(p_rels.iter().cloned());
        self.subquotient(ctx, p_deg, &kernel, &b)
    }

    /// Generators of `{v ∈ F_P : phi(v) ∈ span(q_rels)}` (mod `f` over `R`).
    fn preimage_generators(
        &self,
        ctx: &RingContext,
        p_deg: &[i32],
        q_deg: &[i32],
        phi: &[ModElem],
        q_rels: &[ModElem],
    ) -> Result<Vec<ModElem>> {
        let n = p_deg.len();
        if q_deg.is_empty() || phi.iter().all(|e| e.is_zero()) {
            return Ok((0..n).map(ModElem::basis).collect());
        }
        let q_rels: Vec<ModElem> = q_rels.iter().filter(|r| !r.is_zero()).cloned().collect();
        let mut gens = phi.to_vec();
        gens.extend(q_rels.iter().cloned());
        let mut gen_deg = p_deg.to_vec();
        gen_deg.extend(q_rels.iter().map(|r| r.degree(q_deg).unwrap()));
        let syz = groebner::syzygies(ctx.ring(), q_deg, &gens, &gen_deg, ctx.quotient(), self.limits())?;
        Ok(syz
            .iter()
            .map(|s| reduce_elem(ctx, &s.restrict(0, n), n))
            .filter(|s| !s.is_zero())
            .collect())
    }

    /// `Hom(M, N) = ker(N^{n0} -> N^{n1})` induced by the presentation of
    /// `M`. Component `(j, g)` (index `j·ngens(N) + g`) holds the
    /// `g`-coordinate of the image of generator `j`.
    pub fn hom_module(&self, m: &FPModule, n: &FPModule) -> Result<HomModule> {
        m.check_same_ring(n)?;
        let ctx = m.ctx();
        let ring = ctx.ring();
        let mm = self.minimize(m)?;
        let nm = self.minimize(n)?;
        let (m1, n1) = (&mm.module, &nm.module);
        let (a, b) = (m1.ngens(), n1.ngens());
        let p_deg: Vec<i32> = (0..a)
            .flat_map(|j| (0..b).map(move |g| (j, g)))
            .map(|(j, g)| n1.gen_degrees()[g] - m1.gen_degrees()[j])
            .collect();
        let rels_m = m1.relation_elems();
        let q_deg: Vec<i32> = (0..rels_m.len())
            .flat_map(|r| (0..b).map(move |g| (r, g)))
            .map(|(r, g)| n1.gen_degrees()[g] - m1.relation_degrees()[r])
            .collect();
        let cols_m = m1.presentation().columns();
        // phi(e_(j,g)) = Σ_r d1[j][r] e_(r,g)
        let mut phi = Vec::with_capacity(a * b);
        for j in 0..a {
            for g in 0..b {
                let mut v = vec![Polynomial::zero(); rels_m.len() * b];
                for (r, col) in cols_m.iter().enumerate() {
                    v[r * b + g] = col[j].clone();
                }
                phi.push(ModElem::from_column(&v));
            }
        }
        let n_rels = n1.relation_elems();
        let block = |count: usize| -> Vec<ModElem> {
            let mut out = Vec::new();
            for blk in 0..count {
                for r in &n_rels {
                    out.push(r.shifted(blk * b));
                }
            }
            out
        };
        let q_rels = block(rels_m.len());
        let p_rels = block(a);
        let sq = self.homology(ctx, &p_deg, &q_deg, &phi, &q_rels, &[], &p_rels)?;
        let maps = sq
            .gens
            .iter()
            .map(|t| {
                let vals = t.to_column(ring, a * b);
                // matrix over the minimized presentations
                let mut small = PolyMatrix::zero(b, a);
                for j in 0..a {
                    for g in 0..b {
                        small.set(g, j, vals[j * b + g].clone());
                    }
                }
                self.expand_map(ctx, &small, &mm, &nm, m.ngens(), n.ngens())
            })
            .collect();
        Ok(HomModule {
            module: sq.module,
            maps,
        })
    }

    /// Turn a map between minimized presentations into one between the
    /// original presentations.
    fn expand_map(
        &self,
        ctx: &RingContext,
        small: &PolyMatrix,
        mm: &Minimized,
        nm: &Minimized,
        m_gens: usize,
        n_gens: usize,
    ) -> PolyMatrix {
        let ring = ctx.ring();
        let a = mm.module.ngens();
        let mut out = PolyMatrix::zero(n_gens, m_gens);
        for i in 0..m_gens {
            let coeffs = mm.reexpress[i].to_column(ring, a);
            for (k, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for g in 0..small.rows() {
                    let target_row = nm.kept[g];
                    let v = ring.add(out.get(target_row, i), &ring.mul(c, small.get(g, k)));
                    out.set(target_row, i, ctx.reduce(&v));
                }
            }
        }
        out
    }

    /// `M* = Hom(M, R)`.
    pub fn dual(&self, m: &FPModule) -> Result<HomModule> {
        let r = FPModule::free_rank(m.ctx(), 1);
        self.hom_module(m, &r)
    }

    /// Checks on the natural map `M -> M**`.
    pub fn biduality_defect(&self, m: &FPModule) -> Result<BidualityDefect> {
        let ctx = m.ctx();
        let ring = ctx.ring();
        let m1 = self.minimal_presentation(m)?;
        let n0 = m1.ngens();
        let dual = self.dual(&m1)?;
        let mstar = &dual.module;
        let k = mstar.ngens();
        // column j of phi: (φ_k(e_j))_k, in R^k with labels -deg φ_k
        let labels: Vec<i32> = mstar.gen_degrees().iter().map(|d| -d).collect();
        let cols: Vec<ModElem> = (0..n0)
            .map(|j| {
                let v: Vec<Polynomial> = dual.maps.iter().map(|mat| mat.get(0, j).clone()).collect();
                ModElem::from_column(&v)
            })
            .collect();
        let kernel = self.preimage_generators(ctx, m1.gen_degrees(), &labels, &cols, &[])?;
        let rel_gb = self.relation_basis(&m1)?;
        let kernel_zero = kernel.iter().all(|v| rel_gb.reduces_to_zero(v));
        // M** generators as vectors of values on the generators of M*
        let bidual = self.dual(mstar)?;
        let mut inputs = match ctx.quotient() {
            Some(f) => quotient_relations(f, k),
            None => Vec::new(),
        };
        inputs.extend(cols.iter().map(|c| GbInput {
            elem: c.clone(),
            hidden: false,
        }));
        let img = compute(ring, &labels, &inputs, self.limits())?.basis;
        let cokernel_zero = bidual.maps.iter().all(|mat| {
            let v: Vec<Polynomial> = (0..k).map(|c| mat.get(0, c).clone()).collect();
            img.reduces_to_zero(&ModElem::from_column(&v))
        });
        Ok(BidualityDefect {
            kernel_zero,
            cokernel_zero,
        })
    }

    /// `ann(M)` through one colon in `F0^{⊕n}`: the vector `Σ e_(i,i)` against
    /// block `i` holding a copy of the relations shifted by `-deg e_i`.
    pub fn annihilator(&self, m: &FPModule) -> Result<Vec<Polynomial>> {
        let ctx = m.ctx();
        let ring = ctx.ring();
        let n = m.ngens();
        if n == 0 {
            return Ok(vec![ring.one()]);
        }
        let c = m.gen_degrees();
        let degrees: Vec<i32> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| c[j] - c[i])
            .collect();
        let mut diag = ModElem::zero();
        for i in 0..n {
            diag = diag.add(ctx.field(), &ModElem::basis(i * n + i));
        }
        let mut gens = vec![diag];
        let mut gen_deg = vec![0];
        for i in 0..n {
            for (r, d) in m.relation_elems().iter().zip(m.relation_degrees()) {
                gens.push(r.shifted(i * n));
                gen_deg.push(d - c[i]);
            }
        }
        let syz = groebner::syzygies(ring, &degrees, &gens, &gen_deg, ctx.quotient(), self.limits())?;
        let mut out: Vec<Polynomial> = syz
            .iter()
            .map(|s| ctx.reduce(&s.column_slice(ring, 0, 1)[0]))
            .filter(|p| !p.is_zero())
            .collect();
        out.sort_by(|a, b| b.lead().cmp(&a.lead()));
        out.dedup();
        Ok(out)
    }

    /// Krull dimension of `(gens)` read in `ctx`'s mode (`+ f` over `R`).
    pub fn ideal_dimension(&self, ctx: &RingContext, gens: &[Polynomial]) -> Result<i32> {
        let m = FPModule::cyclic(ctx, gens)?;
        Ok(self.relation_basis(&m)?.lead_terms().dimension())
    }

    /// Whether `g` lies in the ideal `(gens)` of `ctx`'s ring.
    pub fn ideal_contains(&self, ctx: &RingContext, gens: &[Polynomial], g: &Polynomial) -> Result<bool> {
        let m = FPModule::cyclic(ctx, gens)?;
        Ok(self.relation_basis(&m)?.reduces_to_zero(&ModElem::scalar_basis(0, g)))
    }

    /// `dim Supp M = dim R/ann(M)`; -1 for the zero module.
    pub fn krull_dim(&self, m: &FPModule) -> Result<i32> {
        let ann = self.annihilator(m)?;
        self.ideal_dimension(m.ctx(), &ann)
    }

    /// Dimension read off the lead terms of the relation module directly.
    pub fn support_dim(&self, m: &FPModule) -> Result<i32> {
        Ok(self.relation_basis(m)?.lead_terms().dimension())
    }

    pub fn length(&self, m: &FPModule) -> Result<Count> {
        Ok(self.relation_basis(m)?.lead_terms().std_monomial_count())
    }

    /// Dimensions of the graded pieces in degrees `0..=max_deg`.
    pub fn hilbert_counts(&self, m: &FPModule, max_deg: i32) -> Result<Vec<u64>> {
        let gb = self.relation_basis(m)?;
        Ok(gb.lead_terms().graded_counts(m.ctx().ring().weights(), max_deg))
    }

    /// Rank over the fraction field: `ngens` minus the largest size of a
    /// minor that survives modulo `f`.
    pub fn generic_rank(&self, m: &FPModule) -> Result<usize> {
        self.require_domain(m.ctx())?;
        let m1 = self.minimal_presentation(m)?;
        let mat = m1.presentation();
        let ctx = m1.ctx();
        let mut rank = 0;
        for t in 1..=mat.rows().min(mat.cols()) {
            let mut found = false;
            mat.for_each_minor(ctx.ring(), t, |d| {
                found = !ctx.is_zero_in_ring(&d);
                !found
            })?;
            if !found {
                break;
            }
            rank = t;
        }
        Ok(m1.ngens() - rank)
    }

    /// `Fitt_j(M)`: the `(ngens - j)`-minors of a presentation.
    pub fn fitting_ideal(&self, m: &FPModule, j: usize) -> Result<Vec<Polynomial>> {
        let m1 = self.minimal_presentation(m)?;
        let ctx = m1.ctx();
        let n = m1.ngens();
        if n <= j {
            return Ok(vec![ctx.ring().one()]);
        }
        let t = n - j;
        let mat = m1.presentation();
        if t > mat.cols() {
            return Ok(Vec::new());
        }
        let mut out: Vec<Polynomial> = mat
            .minors(ctx.ring(), t)?
            .into_iter()
            .map(|d| ctx.reduce(&d))
            .filter(|d| !d.is_zero())
            .collect();
        out.dedup();
        Ok(out)
    }

    /// `(verdict, rank)`: `Fitt_{r-1} = 0` and `Fitt_r` is `m`-primary or
    /// the unit ideal, with `r` the generic rank. Without a domain there is
    /// no generic rank, so every constant rank `r` is tried, with
    /// `Fitt_{r-1}` only required to vanish away from `m`.
    pub fn is_locally_free_on_punctured(&self, m: &FPModule) -> Result<(bool, usize)> {
        let ctx = m.ctx().with_mode(Mode::R);
        if ctx.is_domain() {
            let r = self.generic_rank(m)?;
            let below_zero = r == 0 || self.fitting_ideal(m, r - 1)?.is_empty();
            let dim = self.ideal_dimension(&ctx, &self.fitting_ideal(m, r)?)?;
            return Ok((below_zero && dim <= 0, r));
        }
        for r in 0..=self.minimal_presentation(m)?.ngens() {
            if self.ideal_dimension(&ctx, &self.fitting_ideal(m, r)?)? > 0 {
                continue;
            }
            if r == 0 {
                return Ok((true, 0));
            }
            let below = self.fitting_ideal(m, r - 1)?;
            if below.is_empty() || self.length(&self.ideal_module(&ctx, &below)?)?.is_finite() {
                return Ok((true, r));
            }
        }
        Ok((false, 0))
    }

    /// `pd_S M` from the minimal `S`-resolution.
    pub fn pd_s(&self, m: &FPModule) -> Result<usize> {
        let res = self.resolve_over_s(m)?;
        Ok(res.betti.iter().rposition(|&b| b > 0).unwrap_or(0))
    }

    /// Auslander–Buchsbaum: `depth M = 4 - pd_S M`.
    pub fn depth(&self, m: &FPModule) -> Result<i32> {
        if self.minimal_presentation(m)?.ngens() == 0 {
            return Err(Error::InvalidArgument("depth of the zero module".into()));
        }
        Ok(4 - self.pd_s(m)? as i32)
    }

    pub fn is_mcm(&self, m: &FPModule) -> Result<bool> {
        Ok(self.depth(m)? == 3)
    }

    /// The ideal `(gens)` as a module: generators in degree `deg g_i`,
    /// relations their syzygies.
    pub fn ideal_module(&self, ctx: &RingContext, gens: &[Polynomial]) -> Result<FPModule> {
        let ring = ctx.ring();
        let gens: Vec<Polynomial> = gens.iter().map(|g| ctx.reduce(g)).filter(|g| !g.is_zero()).collect();
        let mut degrees = Vec::with_capacity(gens.len());
        for g in &gens {
            ring.check_member(g)?;
            match g.homogeneous_degree() {
                Some(d) => degrees.push(d as i32),
                None => return Err(Error::NotHomogeneous(format!("ideal generator `{}`", ring.format(g)))),
            }
        }
        let elems: Vec<ModElem> = gens.iter().map(|g| ModElem::scalar_basis(0, g)).collect();
        let syz = groebner::syzygies(ring, &[0], &elems, &degrees, ctx.quotient(), self.limits())?;
        let syz: Vec<ModElem> = syz
            .iter()
            .map(|s| reduce_elem(ctx, s, gens.len()))
            .filter(|s| !s.is_zero())
            .collect();
        let (idx, _) = groebner::minimal_generators(ring, &degrees, &syz, ctx.quotient(), self.limits())?;
        Ok(FPModule::from_elems(
            ctx,
            degrees,
            idx.into_iter().map(|i| syz[i].clone()).collect(),
        ))
    }

    /// Well-definedness: images of source relations lie in the target's
    /// relations.
    pub fn verify_map(&self, map: &ModuleMap) -> Result<bool> {
        let ring = map.source.ctx().ring();
        let gb = self.relation_basis(&map.target)?;
        let images = map.image_elems();
        for col in map.source.presentation().columns() {
            let mut acc = ModElem::zero();
            for (c, img) in col.iter().zip(&images) {
                acc = acc.add(ring.field(), &img.mul_poly(ring, c));
            }
            if !gb.reduces_to_zero(&acc) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The kernel of a map as a presented module.
    pub fn map_kernel(&self, map: &ModuleMap) -> Result<Subquotient> {
        let ctx = map.source.ctx();
        let q_deg: Vec<i32> = map.target.gen_degrees().iter().map(|d| d - map.degree).collect();
        let q_rels = map.target.relation_elems();
        self.homology(
            ctx,
            map.source.gen_degrees(),
            &q_deg,
            &map.image_elems(),
            &q_rels,
            &[],
            &map.source.relation_elems(),
        )
    }

    pub fn is_injective(&self, map: &ModuleMap) -> Result<bool> {
        Ok(self.map_kernel(map)?.module.ngens() == 0)
    }

    pub fn is_surjective(&self, map: &ModuleMap) -> Result<bool> {
        let t = &map.target;
        let ctx = t.ctx();
        let mut inputs = t.full_relation_inputs();
        inputs.extend(
            map.image_elems()
                .into_iter()
                .map(|elem| GbInput { elem, hidden: false }),
        );
        let gb = compute(ctx.ring(), t.gen_degrees(), &inputs, self.limits())?.basis;
        Ok((0..t.ngens()).all(|i| gb.reduces_to_zero(&ModElem::basis(i))))
    }

    /// Every check that `0 -> A --inj--> B --surj--> C -> 0` is exact.
    pub fn check_short_exact(&self, inj: &ModuleMap, surj: &ModuleMap) -> Result<ExactnessCheck> {
        if inj.target != surj.source {
            return Err(Error::Semantic("the two maps do not share the middle module".into()));
        }
        let b = &inj.target;
        let ring = b.ctx().ring();
        let k = ring.field();
        let maps_defined = self.verify_map(inj)? && self.verify_map(surj)?;
        let injective = self.is_injective(inj)?;
        let surjective = self.is_surjective(surj)?;
        let c_gb = self.relation_basis(&surj.target)?;
        let surj_imgs = surj.image_elems();
        let composite_zero = inj.image_elems().iter().all(|v| {
            let col = v.to_column(ring, b.ngens());
            let mut acc = ModElem::zero();
            for (c, img) in col.iter().zip(&surj_imgs) {
                acc = acc.add(k, &img.mul_poly(ring, c));
            }
            c_gb.reduces_to_zero(&acc)
        });
        let mut inputs = b.full_relation_inputs();
        inputs.extend(
            inj.image_elems()
                .into_iter()
                .map(|elem| GbInput { elem, hidden: false }),
        );
        let im_gb = compute(ring, b.gen_degrees(), &inputs, self.limits())?.basis;
        let middle_exact = self.map_kernel(surj)?.gens.iter().all(|g| im_gb.reduces_to_zero(g));
        Ok(ExactnessCheck {
            maps_defined,
            injective,
            surjective,
            composite_zero,
            middle_exact,
        })
    }

    /// Cokernel of a degree-zero map.
    pub fn cokernel(&self, map: &ModuleMap) -> Result<FPModule> {
        let t = &map.target;
        let mut rels = t.relation_elems();
        rels.extend(map.image_elems().into_iter().filter(|e| !e.is_zero()));
        let m = FPModule::from_elems(t.ctx(), t.gen_degrees().to_vec(), rels);
        Ok(m)
    }
}

pub(crate) fn reduce_elem(ctx: &RingContext, v: &ModElem, n: usize) -> ModElem {
    if ctx.quotient().is_none() {
        return v.clone();
    }
    let col: Vec<Polynomial> = v.to_column(ctx.ring(), n).iter().map(|p| ctx.reduce(p)).collect();
    ModElem::from_column(&col)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::make_ring;

    fn qc() -> RingContext {
        make_ring(101, ["x", "y", "z", "w"], [1, 1, 1, 1], "x*y - z*w").unwrap()
    }

    fn p(ctx: &RingContext, s: &str) -> Polynomial {
        ctx.ring().parse(s).unwrap()
    }

    fn i_xz(ctx: &RingContext) -> FPModule {
        FPModule::new(
            ctx,
            vec![1, 1],
            vec![vec![p(ctx, "y"), p(ctx, "-w")], vec![p(ctx, "z"), p(ctx, "-x")]],
        )
        .unwrap()
    }

    fn eng() -> Engine {
        Engine::default()
    }

    #[test]
    fn unit_pivot_elimination() {
        let r = qc();
        // gen 2 is tied to the first relation by a unit
        let m = FPModule::new(
            &r,
            vec![0, 1],
            vec![vec![p(&r, "x"), p(&r, "1")], vec![p(&r, "0"), p(&r, "y")]],
        )
        .unwrap();
        let mm = eng().minimize(&m).unwrap();
        assert_eq!(mm.module.ngens(), 1);
        assert_eq!(mm.kept, vec![0]);
        // e_2 = -x e_1, so the second relation becomes -xy e_1
        assert_eq!(eng().length(&mm.module).unwrap(), eng().length(&m).unwrap());
        let ia = i_xz(&r);
        assert_eq!(
            eng().minimal_presentation(&ia).unwrap().presentation(),
            ia.presentation()
        );
    }

    #[test]
    fn f_relation_depends_on_mode() {
        let r = qc();
        let s = r.with_mode(Mode::S);
        let ms = FPModule::new(&s, vec![0], vec![vec![r.f().clone()]]).unwrap();
        assert_eq!(eng().minimal_presentation(&ms).unwrap().nrels(), 1);
        let mr = FPModule::new(&r, vec![0], vec![vec![r.f().clone()]]).unwrap();
        assert_eq!(mr.nrels(), 0);
    }

    #[test]
    fn freeness_and_rank() {
        let r = qc();
        let e = eng();
        assert_eq!(e.is_free(&FPModule::free_rank(&r, 3)).unwrap(), (true, 3));
        assert!(!e.is_free(&i_xz(&r)).unwrap().0);
        assert_eq!(e.is_free(&FPModule::zero(&r)).unwrap(), (true, 0));
        assert_eq!(e.generic_rank(&FPModule::free_rank(&r, 3)).unwrap(), 3);
        assert_eq!(e.generic_rank(&i_xz(&r)).unwrap(), 1);
        assert_eq!(e.generic_rank(&FPModule::residue_field(&r)).unwrap(), 0);
    }

    #[test]
    fn lengths() {
        let r = qc();
        let e = eng();
        assert_eq!(e.length(&FPModule::residue_field(&r)).unwrap(), Count::Finite(1));
        let m2: Vec<Polynomial> = ["x^2", "x*y", "x*z", "x*w", "y^2", "y*z", "y*w", "z^2", "z*w", "w^2"]
            .iter()
            .map(|s| p(&r, s))
            .collect();
        assert_eq!(e.length(&FPModule::cyclic(&r, &m2).unwrap()).unwrap(), Count::Finite(5));
        let mxz = FPModule::cyclic(&r, &[p(&r, "x"), p(&r, "z")]).unwrap();
        assert_eq!(e.length(&mxz).unwrap(), Count::Infinite);
    }

    #[test]
    fn dimensions_via_annihilator() {
        let r = qc();
        let e = eng();
        let mxz = FPModule::cyclic(&r, &[p(&r, "x"), p(&r, "z")]).unwrap();
        assert_eq!(e.krull_dim(&FPModule::free_rank(&r, 1)).unwrap(), 3);
        assert_eq!(e.krull_dim(&mxz).unwrap(), 2);
        assert_eq!(e.krull_dim(&FPModule::residue_field(&r)).unwrap(), 0);
        assert_eq!(e.krull_dim(&FPModule::zero(&r)).unwrap(), -1);
        for m in [mxz, i_xz(&r), FPModule::residue_field(&r)] {
            assert_eq!(e.krull_dim(&m).unwrap(), e.support_dim(&m).unwrap());
        }
    }

    #[test]
    fn annihilators() {
        let r = qc();
        let e = eng();
        let mxz = FPModule::cyclic(&r, &[p(&r, "x"), p(&r, "z")]).unwrap();
        let ann = e.annihilator(&mxz).unwrap();
        let want = [p(&r, "x"), p(&r, "z")];
        for g in &want {
            assert!(e.ideal_contains(&r, &ann, g).unwrap());
        }
        for g in &ann {
            assert!(e.ideal_contains(&r, &want, g).unwrap());
        }
        assert!(e.annihilator(&FPModule::free_rank(&r, 1)).unwrap().is_empty());
        assert!(e.annihilator(&i_xz(&r)).unwrap().is_empty());
    }

    #[test]
    fn fitting_ideals() {
        let r = qc();
        let e = eng();
        let mxz = FPModule::cyclic(&r, &[p(&r, "x"), p(&r, "z")]).unwrap();
        assert_eq!(e.fitting_ideal(&mxz, 0).unwrap(), vec![p(&r, "x"), p(&r, "z")]);
        let f1 = e.fitting_ideal(&i_xz(&r), 1).unwrap();
        assert_eq!(f1.len(), 4);
        assert_eq!(e.ideal_dimension(&r, &f1).unwrap(), 0);
        assert!(e.fitting_ideal(&i_xz(&r), 0).unwrap().is_empty());
        assert_eq!(e.fitting_ideal(&i_xz(&r), 3).unwrap(), vec![r.ring().one()]);
        assert_eq!(e.is_locally_free_on_punctured(&i_xz(&r)).unwrap(), (true, 1));
        assert_eq!(e.is_locally_free_on_punctured(&mxz).unwrap(), (false, 0));
        assert_eq!(
            e.is_locally_free_on_punctured(&FPModule::free_rank(&r, 2)).unwrap(),
            (true, 2)
        );
    }

    #[test]
    fn tensor_products() {
        let r = qc();
        let e = eng();
        let mxz = FPModule::cyclic(&r, &[p(&r, "x"), p(&r, "z")]).unwrap();
        let myw = FPModule::cyclic(&r, &[p(&r, "y"), p(&r, "w")]).unwrap();
        assert_eq!(e.length(&mxz.tensor(&myw).unwrap()).unwrap(), Count::Finite(1));
        let one = FPModule::free_rank(&r, 1);
        assert_eq!(
            e.hilbert_counts(&one.tensor(&i_xz(&r)).unwrap(), 6).unwrap(),
            e.hilbert_counts(&i_xz(&r), 6).unwrap()
        );
        assert_eq!(mxz.tensor(&FPModule::zero(&r)).unwrap().ngens(), 0);
    }

    #[test]
    fn homs_and_duals() {
        let r = qc();
        let e = eng();
        let ia = i_xz(&r);
        let end = e.hom_module(&ia, &ia).unwrap();
        assert_eq!((end.module.ngens(), end.module.nrels()), (1, 0));
        let k = FPModule::residue_field(&r);
        assert_eq!(e.dual(&k).unwrap().module.ngens(), 0);
        let one = FPModule::free_rank(&r, 1);
        let h = e.hom_module(&one, &ia).unwrap();
        assert_eq!(
            e.hilbert_counts(&h.module, 6).unwrap(),
            e.hilbert_counts(&ia, 6).unwrap()
        );
        let d = e.dual(&ia).unwrap().module;
        assert_eq!(e.generic_rank(&d).unwrap(), 1);
        assert!(!e.is_free(&d).unwrap().0);
        let r2 = FPModule::free_rank(&r, 2);
        assert_eq!(e.is_free(&e.dual(&r2).unwrap().module).unwrap(), (true, 2));
        // every decoded generator is a well-defined map
        for (g, mat) in end.maps.iter().enumerate() {
            let map = ModuleMap::new(&ia, &ia, mat.clone(), end.module.gen_degrees()[g]).unwrap();
            assert!(e.verify_map(&map).unwrap());
        }
    }

    #[test]
    fn reflexivity() {
        let r = qc();
        let e = eng();
        let refl = |m: &FPModule| e.biduality_defect(m).unwrap();
        assert!(refl(&FPModule::free_rank(&r, 2)).reflexive());
        assert!(refl(&i_xz(&r)).reflexive());
        assert!(!refl(&FPModule::residue_field(&r)).kernel_zero);
        let d = e.dual(&i_xz(&r)).unwrap().module;
        assert!(refl(&d).reflexive());
        let mxz = FPModule::cyclic(&r, &[p(&r, "x"), p(&r, "z")]).unwrap();
        assert!(!refl(&mxz).kernel_zero);
    }

    #[test]
    fn depths() {
        let r = qc();
        let e = eng();
        assert_eq!(e.depth(&FPModule::free_rank(&r, 1)).unwrap(), 3);
        assert_eq!(e.depth(&FPModule::residue_field(&r)).unwrap(), 0);
        assert_eq!(e.depth(&i_xz(&r)).unwrap(), 3);
        assert!(e.depth(&FPModule::zero(&r)).is_err());
        assert!(e.is_mcm(&i_xz(&r)).unwrap());
        assert!(!e.is_mcm(&FPModule::residue_field(&r)).unwrap());
    }

    #[test]
    fn ideal_as_module_matches_quadric_presentation() {
        let r = qc();
        let e = eng();
        let ideal = e.ideal_module(&r, &[p(&r, "x"), p(&r, "z")]).unwrap();
        assert_eq!(ideal.ngens(), 2);
        assert_eq!(ideal.nrels(), 2);
        assert_eq!(
            e.hilbert_counts(&ideal, 6).unwrap(),
            e.hilbert_counts(&i_xz(&r), 6).unwrap()
        );
    }

    #[test]
    fn inhomogeneous_relation_is_rejected() {
        let r = qc();
        let err = FPModule::new(&r, vec![0, 0], vec![vec![p(&r, "x"), p(&r, "y^2")]]).unwrap_err();
        assert!(
            matches!(err, Error::NotHomogeneous(ref s) if s.contains("entry 2")),
            "{err}"
        );
    }
}
