//! Minimal graded free resolutions, periodicity, matrix factorizations and
//! Tor/Ext as presented modules.

use serde::Serialize;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::fpmod::{reduce_elem, FPModule};
use crate::groebner::{self, Count, Lifter, ModElem};
use crate::hypersurface::{Mode, RingContext};
use crate::matrix::PolyMatrix;
use crate::poly::Polynomial;

/// A minimal free resolution prefix `F_k -> .. -> F_1 -> F_0 -> M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionData {
    pub mode: Mode,
    /// Minimal presentation of the resolved module.
    pub module: FPModule,
    /// `differentials[i - 1] = d_i : F_i -> F_{i-1}`, degree-labelled.
    pub differentials: Vec<PolyMatrix>,
    /// Generator degrees of `F_0, .., F_k`.
    pub degrees: Vec<Vec<i32>>,
    pub betti: Vec<usize>,
    /// The next syzygy module is zero, so the resolution is finite.
    pub complete: bool,
    pub minimal: bool,
}

impl ResolutionData {
    /// Number of differentials computed.
    pub fn len(&self) -> usize {
        self.differentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.differentials.is_empty()
    }

    /// Whether `F_0..F_steps` (and `d_1..d_steps`) are known.
    pub fn covers(&self, steps: usize) -> bool {
        self.complete || self.len() >= steps
    }

    /// `rank F_i`, zero past the end of a complete resolution.
    pub fn rank(&self, i: usize) -> Option<usize> {
        match self.betti.get(i) {
            Some(&b) => Some(b),
            None if self.complete => Some(0),
            None => None,
        }
    }

    pub fn degrees_at(&self, i: usize) -> Option<Vec<i32>> {
        match self.degrees.get(i) {
            Some(d) => Some(d.clone()),
            None if self.complete => Some(Vec::new()),
            None => None,
        }
    }

    /// `d_i`, or a zero matrix of the right shape past the end.
    pub fn differential(&self, i: usize) -> Option<PolyMatrix> {
        assert!(i >= 1, "differentials are numbered from 1");
        if let Some(d) = self.differentials.get(i - 1) {
            return Some(d.clone());
        }
        let (rows, cols) = (self.rank(i - 1)?, self.rank(i)?);
        Some(PolyMatrix::zero(rows, cols))
    }

    /// The first `steps` differentials.
    pub fn truncated(&self, steps: usize) -> ResolutionData {
        if self.len() <= steps {
            return self.clone();
        }
        ResolutionData {
            differentials: self.differentials[..steps].to_vec(),
            degrees: self.degrees[..=steps].to_vec(),
            betti: self.betti[..=steps].to_vec(),
            complete: false,
            ..self.clone()
        }
    }
}

/// Square matrices over `S` with `A·B = B·A = f·I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFactorization {
    pub a: PolyMatrix,
    pub b: PolyMatrix,
}

impl MatrixFactorization {
    pub fn size(&self) -> usize {
        self.a.rows()
    }
}

/// `Tor_i` or `Ext^i` as a presented module.
#[derive(Clone, Debug)]
pub struct HomologyReport {
    pub index: usize,
    pub module: FPModule,
    pub length: Count,
}

/// Outcome of the structural checks on a resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionCheck {
    pub d_squared_zero: bool,
    pub exact: bool,
    pub minimal: bool,
}

impl ResolutionCheck {
    pub fn ok(&self) -> bool {
        self.d_squared_zero && self.exact && self.minimal
    }
}

fn elems_to_matrix(ctx: &RingContext, rows: &[i32], cols: &[ModElem]) -> PolyMatrix {
    let n = rows.len();
    let col_deg: Vec<i32> = cols.iter().map(|e| e.degree(rows).unwrap()).collect();
    let entries: Vec<Vec<Polynomial>> = cols.iter().map(|e| e.to_column(ctx.ring(), n)).collect();
    PolyMatrix::from_columns(n, entries).with_degrees_unchecked(rows.to_vec(), col_deg)
}

fn matrix_columns(m: &PolyMatrix) -> Vec<ModElem> {
    m.columns().iter().map(|c| ModElem::from_column(c)).collect()
}

/// Images of the generators `(s, g)` of `F_src ⊗ N` under `entry ⊗ 1`,
/// where `entry(t, s)` is the coefficient of target `t` for source `s`.
fn kron_images<'a>(src: usize, tgt: usize, n: usize, entry: impl Fn(usize, usize) -> &'a Polynomial) -> Vec<ModElem> {
    let mut out = Vec::with_capacity(src * n);
    for s in 0..src {
        for g in 0..n {
            let mut v = vec![Polynomial::zero(); tgt * n];
            for t in 0..tgt {
                v[t * n + g] = entry(t, s).clone();
            }
            out.push(ModElem::from_column(&v));
        }
    }
    out
}

fn block_relations(copies: usize, rels: &[ModElem], n: usize) -> Vec<ModElem> {
    let mut out = Vec::with_capacity(copies * rels.len());
    for b in 0..copies {
        out.extend(rels.iter().map(|r| r.shifted(b * n)));
    }
    out
}

impl Engine {
    fn start_resolution(&self, m: &FPModule) -> Result<ResolutionData> {
        let mm = self.minimal_presentation(m)?;
        let mut res = ResolutionData {
            mode: m.ctx().mode(),
            module: mm.clone(),
            differentials: Vec::new(),
            degrees: vec![mm.gen_degrees().to_vec()],
            betti: vec![mm.ngens()],
            complete: mm.nrels() == 0,
            minimal: true,
        };
        if mm.nrels() > 0 {
            res.differentials.push(mm.presentation().clone());
            res.degrees.push(mm.relation_degrees().to_vec());
            res.betti.push(mm.nrels());
        }
        Ok(res)
    }

    fn extend_resolution(&self, res: &mut ResolutionData, steps: usize) -> Result<()> {
        let ctx = res.module.ctx().clone();
        let ring = ctx.ring();
        while !res.complete && res.len() < steps {
            let k = res.len();
            let d = &res.differentials[k - 1];
            let cols = matrix_columns(d);
            let src = &res.degrees[k - 1];
            let gen_deg = &res.degrees[k];
            let syz = groebner::syzygies(ring, src, &cols, gen_deg, ctx.quotient(), self.limits())?;
            let syz: Vec<ModElem> = syz
                .iter()
                .map(|s| reduce_elem(&ctx, s, gen_deg.len()))
                .filter(|s| !s.is_zero())
                .collect();
            let (idx, _) = groebner::minimal_generators(ring, gen_deg, &syz, ctx.quotient(), self.limits())?;
            if idx.is_empty() {
                res.complete = true;
                break;
            }
            let mut next: Vec<ModElem> = idx.into_iter().map(|i| syz[i].clone()).collect();
            next.sort_by_key(|e| e.degree(gen_deg).unwrap());
            let mat = elems_to_matrix(&ctx, gen_deg, &next);
            res.degrees.push(mat.col_degrees().unwrap().to_vec());
            res.betti.push(next.len());
            res.differentials.push(mat);
        }
        Ok(())
    }

    /// Minimal resolution prefix with `steps` differentials, in the
    /// module's own mode. Served from the cache when possible.
    pub fn resolve(&self, m: &FPModule, steps: usize) -> Result<ResolutionData> {
        let key = self.cache().key_for(m);
        let lock = self.cache().key_lock(&key);
        let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
        let cached = self.cache().lookup(&key, m.ctx());
        let mut res = match cached {
            Some(r) if r.covers(steps) => return Ok(r.truncated(steps)),
            Some(r) => r,
            None => self.start_resolution(m)?,
        };
        self.extend_resolution(&mut res, steps)?;
        self.cache().store(&key, &res);
        Ok(res.truncated(steps))
    }

    /// The finite minimal resolution over `S` (`R`-modules are lifted by
    /// making `f·e_i` explicit).
    pub fn resolve_over_s(&self, m: &FPModule) -> Result<ResolutionData> {
        let ms = m.with_mode(Mode::S);
        let res = self.resolve(&ms, 5)?;
        if !res.complete {
            return Err(Error::Engine("S-resolution did not terminate within 4 steps".into()));
        }
        Ok(res)
    }

    pub fn resolve_over_r(&self, m: &FPModule, steps: usize) -> Result<ResolutionData> {
        if m.ctx().mode() != Mode::R {
            return Err(Error::InvalidArgument("resolve_over_r needs a module over R".into()));
        }
        if steps > self.limits().max_steps {
            return Err(Error::ResourceBound(format!(
                "{steps} resolution steps requested; the ceiling is {}",
                self.limits().max_steps
            )));
        }
        self.resolve(m, steps)
    }

    /// `d^2 = 0`, homology zero at interior spots, no unit entries.
    pub fn verify_resolution(&self, res: &ResolutionData) -> Result<ResolutionCheck> {
        let ctx = res.module.ctx();
        let ring = ctx.ring();
        let mut d_squared_zero = true;
        for i in 1..res.len() {
            let prod = res.differentials[i - 1].mul(ring, &res.differentials[i])?;
            if !ctx.reduce_matrix(&prod).is_zero() {
                d_squared_zero = false;
            }
        }
        let minimal = res
            .differentials
            .iter()
            .all(|d| (0..d.rows()).all(|r| (0..d.cols()).all(|c| d.get(r, c).constant_value().is_none_or(|c| c == 0))));
        let mut exact = true;
        for i in 1..res.len() {
            let h = self.homology(
                ctx,
                &res.degrees[i],
                &res.degrees[i - 1],
                &matrix_columns(&res.differentials[i - 1]),
                &[],
                &matrix_columns(&res.differentials[i]),
                &[],
            )?;
            if h.module.ngens() != 0 {
                exact = false;
            }
        }
        Ok(ResolutionCheck {
            d_squared_zero,
            exact,
            minimal,
        })
    }

    /// `Tor_i(M, N) = H_i(F ⊗ N)` with generators `(a, g)` of `F_i ⊗ N`.
    pub fn tor_module(&self, m: &FPModule, n: &FPModule, i: usize) -> Result<HomologyReport> {
        m.check_same_ring(n)?;
        let res = self.resolve(m, i + 1)?;
        self.tor_from_resolution(&res, n, i)
    }

    pub fn tor_from_resolution(&self, res: &ResolutionData, n: &FPModule, i: usize) -> Result<HomologyReport> {
        let ctx = n.ctx();
        let n1 = self.minimal_presentation(n)?;
        let nn = n1.ngens();
        let n_rels = n1.relation_elems();
        let short = || Error::InvalidArgument(format!("resolution too short for Tor_{i}"));
        let fi = res.degrees_at(i).ok_or_else(short)?;
        let tensor_deg = |f: &[i32]| -> Vec<i32> {
            f.iter()
                .flat_map(|a| n1.gen_degrees().iter().map(move |g| a + g))
                .collect()
        };
        let p_deg = tensor_deg(&fi);
        let (q_deg, phi) = if i == 0 {
            (Vec::new(), vec![ModElem::zero(); p_deg.len()])
        } else {
            let prev = res.degrees_at(i - 1).ok_or_else(short)?;
            let d = res.differential(i).ok_or_else(short)?;
            (
                tensor_deg(&prev),
                kron_images(fi.len(), prev.len(), nn, |t, s| d.get(t, s)),
            )
        };
        let next = res.degrees_at(i + 1).ok_or_else(short)?;
        let d_next = res.differential(i + 1).ok_or_else(short)?;
        let psi = kron_images(next.len(), fi.len(), nn, |t, s| d_next.get(t, s));
        let q_rels = block_relations(q_deg.len() / nn.max(1), &n_rels, nn);
        let p_rels = block_relations(fi.len(), &n_rels, nn);
        let h = self.homology(ctx, &p_deg, &q_deg, &phi, &q_rels, &psi, &p_rels)?;
        let length = self.length(&h.module)?;
        Ok(HomologyReport {
            index: i,
            module: h.module,
            length,
        })
    }

    /// `Ext^i(M, N) = H^i(Hom(F, N))`; component `(j, g)` of `Hom(F_i, N)`
    /// has degree `deg N_g - deg F_i[j]`.
    pub fn ext_module(&self, m: &FPModule, n: &FPModule, i: usize) -> Result<HomologyReport> {
        m.check_same_ring(n)?;
        let res = self.resolve(m, i + 1)?;
        self.ext_from_resolution(&res, n, i)
    }

    pub fn ext_from_resolution(&self, res: &ResolutionData, n: &FPModule, i: usize) -> Result<HomologyReport> {
        let ctx = n.ctx();
        let n1 = self.minimal_presentation(n)?;
        let nn = n1.ngens();
        let n_rels = n1.relation_elems();
        let short = || Error::InvalidArgument(format!("resolution too short for Ext^{i}"));
        let hom_deg = |f: &[i32]| -> Vec<i32> {
            f.iter()
                .flat_map(|a| n1.gen_degrees().iter().map(move |g| g - a))
                .collect()
        };
        let fi = res.degrees_at(i).ok_or_else(short)?;
        let next = res.degrees_at(i + 1).ok_or_else(short)?;
        let d_next = res.differential(i + 1).ok_or_else(short)?;
        let p_deg = hom_deg(&fi);
        let q_deg = hom_deg(&next);
        // (phi ∘ d)(e_k) = Σ_j d[j][k] phi(e_j)
        let phi = kron_images(fi.len(), next.len(), nn, |t, s| d_next.get(s, t));
        let psi = if i == 0 {
            Vec::new()
        } else {
            let prev = res.degrees_at(i - 1).ok_or_else(short)?;
            let d = res.differential(i).ok_or_else(short)?;
            kron_images(prev.len(), fi.len(), nn, |t, s| d.get(s, t))
        };
        let q_rels = block_relations(next.len(), &n_rels, nn);
        let p_rels = block_relations(fi.len(), &n_rels, nn);
        let h = self.homology(ctx, &p_deg, &q_deg, &phi, &q_rels, &psi, &p_rels)?;
        let length = self.length(&h.module)?;
        Ok(HomologyReport {
            index: i,
            module: h.module,
            length,
        })
    }

    /// `χ^S(M, N) = Σ (-1)^i ℓ Tor_i^S(M, N)` over the finite `S`-resolution.
    pub fn serre_chi_s(&self, m: &FPModule, n: &FPModule) -> Result<i64> {
        m.check_same_ring(n)?;
        let (ms, ns) = (m.with_mode(Mode::S), n.with_mode(Mode::S));
        if !self.length(&ms.tensor(&ns)?)?.is_finite() {
            return Err(Error::InvalidArgument("M ⊗ N does not have finite length".into()));
        }
        let res = self.resolve_over_s(&ms)?;
        let mut chi = 0i64;
        for i in 0..res.betti.len() {
            let t = self.tor_from_resolution(&res, &ns, i)?;
            let l = t
                .length
                .finite()
                .ok_or_else(|| Error::Engine(format!("Tor_{i}^S has infinite length")))?;
            chi += if i % 2 == 0 { l as i64 } else { -(l as i64) };
        }
        Ok(chi)
    }

    /// Extract `(A, B)` from an MCM module without free summands: `A` is
    /// the minimal presentation read over `S`, and column `i` of `B`
    /// expresses `f·e_i` through the columns of `A`.
    pub fn matrix_factorization(&self, m: &FPModule) -> Result<MatrixFactorization> {
        if m.ctx().mode() != Mode::R {
            return Err(Error::InvalidArgument(
                "matrix factorizations need a module over R".into(),
            ));
        }
        if !self.is_mcm(m)? {
            return Err(Error::Ineligible("module is not maximal Cohen-Macaulay".into()));
        }
        let res = self.resolve_over_r(m, 2)?;
        if res.betti.len() < 3 || res.betti[0] != res.betti[1] || res.betti[1] != res.betti[2] {
            return Err(Error::Ineligible(format!(
                "betti prefix {:?} is not square; the module has a free summand",
                res.betti
            )));
        }
        let ctx = m.ctx();
        let s = ctx.with_mode(Mode::S);
        let ring = ctx.ring();
        let a = res.differentials[0].clone();
        let rows = res.degrees[0].clone();
        let cols = res.degrees[1].clone();
        let lifter = Lifter::new(ring, &rows, &matrix_columns(&a), &cols, s.quotient(), self.limits())?;
        let n = rows.len();
        let mut b_cols = Vec::with_capacity(n);
        for i in 0..n {
            let target = ModElem::scalar_basis(i, ctx.f());
            let c = lifter
                .lift(&target)
                .ok_or_else(|| Error::Engine("f·e_i is not in the image of A over S".into()))?;
            b_cols.push(c.to_column(ring, n));
        }
        let fdeg = ctx.f_degree() as i32;
        let b_row: Vec<i32> = cols.clone();
        let b_col: Vec<i32> = rows.iter().map(|d| d + fdeg).collect();
        let b = PolyMatrix::from_columns(n, b_cols).with_degrees(b_row, b_col)?;
        let mf = MatrixFactorization { a, b };
        self.verify_factorization(ctx, &mf)?;
        Ok(mf)
    }

    /// `A·B = B·A = f·I` exactly over `S`; a failure is an engine bug.
    pub fn verify_factorization(&self, ctx: &RingContext, mf: &MatrixFactorization) -> Result<()> {
        let ring = ctx.ring();
        let n = mf.size();
        let mut fi = PolyMatrix::zero(n, n);
        for i in 0..n {
            fi.set(i, i, ctx.f().clone());
        }
        let strip = |m: PolyMatrix| PolyMatrix::from_columns(m.rows(), m.columns());
        let ab = strip(mf.a.mul(ring, &mf.b)?);
        let ba = strip(mf.b.mul(ring, &mf.a)?);
        if ab != fi || ba != fi {
            return Err(Error::Engine("A·B = B·A = f·I failed".into()));
        }
        Ok(())
    }

    /// `Ω^i(M) = coker(d_{i+1})`, the `i`-th syzygy module.
    pub fn syzygy_module(&self, m: &FPModule, i: usize) -> Result<FPModule> {
        if i == 0 {
            return self.minimal_presentation(m);
        }
        let res = self.resolve(m, i + 1)?;
        let ctx = m.ctx();
        let Some(d) = res.differential(i + 1) else {
            return Err(Error::InvalidArgument("resolution too short".into()));
        };
        let degrees = res.degrees_at(i).unwrap_or_default();
        let cols: Vec<Vec<Polynomial>> = d.columns();
        FPModule::new(ctx, degrees, cols)
    }
}

/// Least `i` with `b_{j+2} = b_j` and `F_{j+2}` degrees `= F_j` degrees
/// plus one common shift, for all computed `j ≥ i`. At least one comparison
/// must fall inside the prefix; complete resolutions continue with zeros.
pub fn detect_periodicity(res: &ResolutionData) -> Result<usize> {
    let known = res.betti.len();
    let last = if res.complete { known + 2 } else { known };
    let betti = |j: usize| res.rank(j).unwrap_or(0);
    let degs = |j: usize| {
        let mut d = res.degrees_at(j).unwrap_or_default();
        d.sort_unstable();
        d
    };
    let periodic_from = |i: usize| -> bool {
        let mut shift: Option<i32> = None;
        for j in i..last.saturating_sub(2) {
            if betti(j + 2) != betti(j) {
                return false;
            }
            let (a, b) = (degs(j), degs(j + 2));
            if a.is_empty() {
                continue;
            }
            let s = b[0] - a[0];
            if a.iter().zip(&b).any(|(x, y)| y - x != s) {
                return false;
            }
            match shift {
                None => shift = Some(s),
                Some(t) if t != s => return false,
                _ => {}
            }
        }
        true
    };
    // past the end of a complete resolution every rank is zero
    let candidates = if res.complete {
        known + 1
    } else {
        last.saturating_sub(2)
    };
    (0..candidates).find(|&i| periodic_from(i)).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "betti prefix {:?} is not periodic within the computed range; lengthen it",
            res.betti
        ))
    })
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

    #[test]
    fn s_resolutions() {
        let r = qc();
        let e = Engine::default();
        assert_eq!(
            e.resolve_over_s(&FPModule::residue_field(&r)).unwrap().betti,
            vec![1, 4, 6, 4, 1]
        );
        assert_eq!(e.resolve_over_s(&FPModule::free_rank(&r, 1)).unwrap().betti, vec![1, 1]);
        assert_eq!(e.resolve_over_s(&i_xz(&r)).unwrap().betti, vec![2, 2]);
    }

    #[test]
    fn r_resolutions_and_periodicity() {
        let r = qc();
        let e = Engine::default();
        let k = e.resolve_over_r(&FPModule::residue_field(&r), 6).unwrap();
        assert_eq!(k.betti, vec![1, 4, 7, 8, 8, 8, 8]);
        assert_eq!(detect_periodicity(&k).unwrap(), 3);
        assert!(e.verify_resolution(&k).unwrap().ok());
        let ia = e.resolve_over_r(&i_xz(&r), 5).unwrap();
        assert_eq!(ia.betti, vec![2; 6]);
        assert_eq!(detect_periodicity(&ia).unwrap(), 0);
        let free = e.resolve_over_r(&FPModule::free_rank(&r, 1), 4).unwrap();
        assert_eq!(free.betti, vec![1]);
        assert!(free.complete);
        assert_eq!(detect_periodicity(&free).unwrap(), 1);
    }

    #[test]
    fn factorizations() {
        let r = qc();
        let e = Engine::default();
        let mf = e.matrix_factorization(&i_xz(&r)).unwrap();
        assert_eq!(mf.size(), 2);
        let want_b = PolyMatrix::parse_rows(r.ring(), &[&["x", "z"], &["-w", "-y"]]).unwrap();
        assert_eq!(PolyMatrix::from_columns(2, mf.b.columns()), want_b);
        let omega = e.syzygy_module(&FPModule::residue_field(&r), 3).unwrap();
        let big = e.matrix_factorization(&omega).unwrap();
        assert_eq!(big.size(), 8);
        let err = e.matrix_factorization(&FPModule::free_rank(&r, 1)).unwrap_err();
        assert!(matches!(err, Error::Ineligible(_)));
    }

    #[test]
    fn tor_and_ext_basics() {
        let r = qc();
        let e = Engine::default();
        let one = FPModule::free_rank(&r, 1);
        let mxz = FPModule::cyclic(&r, &[p(&r, "x"), p(&r, "z")]).unwrap();
        let myw = FPModule::cyclic(&r, &[p(&r, "y"), p(&r, "w")]).unwrap();
        let k = FPModule::residue_field(&r);
        assert_eq!(e.tor_module(&one, &k, 0).unwrap().length, Count::Finite(1));
        assert_eq!(e.tor_module(&one, &k, 1).unwrap().length, Count::Finite(0));
        assert_eq!(e.tor_module(&mxz, &myw, 0).unwrap().length, Count::Finite(1));
        assert_eq!(e.tor_module(&mxz, &myw, 1).unwrap().length, Count::Finite(0));
        let ia = i_xz(&r);
        assert_eq!(e.ext_module(&ia, &one, 1).unwrap().length, Count::Finite(0));
        assert_eq!(e.ext_module(&ia, &one, 2).unwrap().length, Count::Finite(0));
        assert_eq!(e.ext_module(&ia, &ia, 1).unwrap().length, Count::Finite(0));
        let ext0 = e.ext_module(&one, &ia, 0).unwrap();
        assert_eq!(
            e.hilbert_counts(&ext0.module, 5).unwrap(),
            e.hilbert_counts(&ia, 5).unwrap()
        );
    }

    #[test]
    fn serre_chi() {
        let r = qc();
        let e = Engine::default();
        let mxz = FPModule::cyclic(&r, &[p(&r, "x"), p(&r, "z")]).unwrap();
        let myw = FPModule::cyclic(&r, &[p(&r, "y"), p(&r, "w")]).unwrap();
        let k = FPModule::residue_field(&r);
        assert_eq!(e.serre_chi_s(&mxz, &myw).unwrap(), 1);
        assert_eq!(e.serre_chi_s(&k, &k).unwrap(), 0);
        assert_eq!(e.serre_chi_s(&FPModule::free_rank(&r, 1), &k).unwrap(), 0);
        assert!(e.serre_chi_s(&mxz, &mxz).is_err());
    }
}
