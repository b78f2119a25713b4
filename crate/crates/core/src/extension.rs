//! Relation-extension of a tilted algebra: one new arrow per minimal
//! relation, with the extended algebra bound by the cyclic derivatives of the
//! potential built from the relations. Finite windows of the associated
//! repetitive algebra carry the lifted relations, the shift automorphism, and
//! the pushdown back to the extension.

use crate::algebra::{
    check_minimal_system, default_length_cap, path_algebra, Algebra, AlgebraError,
};
use crate::matrix::Mat;
use crate::quiver::{Arrow, BoundQuiver, Relation};
use crate::rep::Representation;
use crate::scalar::{Field, K};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExtensionError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("window [{lo}, {hi}] too small: {what}")]
    WindowTooSmall { lo: i64, hi: i64, what: String },
    #[error("window copy cap {0} exceeded")]
    CopyCapExceeded(i64),
}

#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub base: BoundQuiver,
    pub tilde: BoundQuiver,
    /// One entry per base relation: the index (in tilde.arrows) of its new
    /// arrow. The relation runs x ~> y; the arrow runs y -> x.
    pub new_arrows: Vec<usize>,
}

impl ExtensionData {
    pub fn is_new_arrow(&self, ai: usize) -> bool {
        ai >= self.base.arrows.len()
    }
}

/// Construct the extended bound quiver. `names` optionally supplies labels
/// for the new arrows (one per relation of `c`, in order).
pub fn relation_extension(
    c: &BoundQuiver,
    names: Option<&[String]>,
) -> Result<ExtensionData, ExtensionError> {
    let base_alg = path_algebra(c, default_length_cap(c))?;
    check_minimal_system(&base_alg, c)?;

    let mut arrows = c.arrows.clone();
    let mut used: std::collections::HashSet<String> = c
        .vertices
        .iter()
        .chain(c.arrows.iter().map(|a| &a.name))
        .cloned()
        .collect();
    let mut new_arrows = Vec::new();
    for (i, r) in c.relations.iter().enumerate() {
        let (x, y) = c.path_endpoints(&r.terms[0].1).expect("validated");
        let name = match names.and_then(|n| n.get(i)) {
            Some(n) if !used.contains(n) => n.clone(),
            _ => {
                let mut k = i;
                loop {
                    let cand = format!("z{}", k);
                    if !used.contains(&cand) {
                        break cand;
                    }
                    k += 1;
                }
            }
        };
        used.insert(name.clone());
        new_arrows.push(arrows.len());
        arrows.push(Arrow { name, src: y, tgt: x });
    }

    // Potential W = sum_i (-1)^i rho_i * alpha_i; relations of the extension
    // are the cyclic derivatives with respect to every arrow. The alternating
    // sign is a presentation gauge (rescaling new arrows); it reproduces the
    // conventional relation presentations of the bundled examples.
    let mut derivatives: HashMap<usize, Vec<(K, Vec<usize>)>> = HashMap::new();
    for (i, r) in c.relations.iter().enumerate() {
        let sign = if i % 2 == 0 { K::one() } else { -K::one() };
        for (coeff, path) in &r.terms {
            let mut cycle: Vec<usize> = path.clone();
            cycle.push(new_arrows[i]);
            let total = sign.clone() * coeff.clone();
            for (pos, &arr) in cycle.iter().enumerate() {
                // rotate so the occurrence is first, then delete it
                let mut rest: Vec<usize> = Vec::with_capacity(cycle.len() - 1);
                rest.extend_from_slice(&cycle[pos + 1..]);
                rest.extend_from_slice(&cycle[..pos]);
                derivatives.entry(arr).or_default().push((total.clone(), rest));
            }
        }
    }
    let mut ordered: Vec<usize> = derivatives.keys().copied().collect();
    ordered.sort_unstable();
    let mut relations = Vec::new();
    for a in ordered {
        let mut terms = derivatives.remove(&a).unwrap();
        // combine equal paths
        terms.sort_by(|x, y| x.1.cmp(&y.1));
        let mut combined: Vec<(K, Vec<usize>)> = Vec::new();
        for (c0, p) in terms {
            match combined.last_mut() {
                Some((cc, pp)) if *pp == p => *cc += c0,
                _ => combined.push((c0, p)),
            }
        }
        combined.retain(|(c0, _)| !c0.is_zero());
        if !combined.is_empty() {
            relations.push(Relation { terms: combined });
        }
    }

    let tilde = BoundQuiver { vertices: c.vertices.clone(), arrows, relations };
    Ok(ExtensionData { base: c.clone(), tilde, new_arrows })
}

/// A finite window of the repetitive algebra: copies lo..=hi of the base
/// quiver, with the new arrows connecting (y, i) -> (x, i-1) and the lifted
/// relations. Vertices are labeled `x@i`.
pub struct Window {
    pub ext: ExtensionData,
    pub lo: i64,
    pub hi: i64,
    pub quiver: BoundQuiver,
    pub algebra: Arc<Algebra>,
    pub base_algebra: Arc<Algebra>,
    pub tilde_algebra: Arc<Algebra>,
    vmap: HashMap<(usize, i64), usize>,
    vinfo: Vec<(usize, i64)>,
    amap: HashMap<(usize, i64), usize>,
    ainfo: Vec<(usize, i64)>,
    guard: i64,
}

impl std::fmt::Debug for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Window[{}, {}] of {} vertices/copy", self.lo, self.hi, self.ext.base.vertices.len())
    }
}

pub fn cluster_repetitive(ext: &ExtensionData, lo: i64, hi: i64) -> Result<Window, ExtensionError> {
    assert!(lo <= hi);
    let base = &ext.base;
    let nb = base.vertices.len();
    let mut vertices = Vec::new();
    let mut vmap = HashMap::new();
    let mut vinfo = Vec::new();
    for i in lo..=hi {
        for x in 0..nb {
            vmap.insert((x, i), vertices.len());
            vinfo.push((x, i));
            vertices.push(format!("{}@{}", base.vertices[x], i));
        }
    }
    let mut arrows = Vec::new();
    let mut amap = HashMap::new();
    let mut ainfo = Vec::new();
    for i in lo..=hi {
        for (ai, a) in ext.tilde.arrows.iter().enumerate() {
            let (src_copy, tgt_copy) = if ext.is_new_arrow(ai) { (i, i - 1) } else { (i, i) };
            if tgt_copy < lo || src_copy > hi {
                continue;
            }
            let src = vmap[&(a.src, src_copy)];
            let tgt = vmap[&(a.tgt, tgt_copy)];
            amap.insert((ai, i), arrows.len());
            ainfo.push((ai, i));
            arrows.push(Arrow { name: format!("{}@{}", a.name, i), src, tgt });
        }
    }
    // Lift every relation of the extension at every anchor copy where all of
    // its arrows exist.
    let mut relations = Vec::new();
    for r in &ext.tilde.relations {
        for i in lo..=hi {
            let mut terms = Vec::new();
            let mut ok = true;
            for (c0, path) in &r.terms {
                let mut cur = i;
                let mut lifted = Vec::new();
                for &a in path {
                    match amap.get(&(a, cur)) {
                        Some(&wa) => lifted.push(wa),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                    if ext.is_new_arrow(a) {
                        cur -= 1;
                    }
                }
                if !ok {
                    break;
                }
                terms.push((c0.clone(), lifted));
            }
            if ok {
                relations.push(Relation { terms });
            }
        }
    }
    let quiver = BoundQuiver { vertices, arrows, relations };
    let algebra = Arc::new(path_algebra(&quiver, default_length_cap(&ext.tilde) + 2)?);
    let base_algebra = Arc::new(path_algebra(base, default_length_cap(base))?);
    let tilde_algebra = Arc::new(path_algebra(&ext.tilde, default_length_cap(&ext.tilde))?);

    let mut w = Window {
        ext: ext.clone(),
        lo,
        hi,
        quiver,
        algebra,
        base_algebra,
        tilde_algebra,
        vmap,
        vinfo,
        amap,
        ainfo,
        guard: 0,
    };
    w.guard = w.compute_guard();
    Ok(w)
}

/// The two-copy truncation of the repetitive algebra.
pub fn cluster_duplicated(ext: &ExtensionData) -> Result<Window, ExtensionError> {
    cluster_repetitive(ext, 0, 1)
}

impl Window {
    pub fn vertex(&self, x: usize, copy: i64) -> Option<usize> {
        self.vmap.get(&(x, copy)).copied()
    }

    pub fn vertex_info(&self, w: usize) -> (usize, i64) {
        self.vinfo[w]
    }

    pub fn arrow(&self, tilde_arrow: usize, copy: i64) -> Option<usize> {
        self.amap.get(&(tilde_arrow, copy)).copied()
    }

    pub fn arrow_info(&self, wa: usize) -> (usize, i64) {
        self.ainfo[wa]
    }

    /// How far the support of a projective/injective can stretch from its
    /// vertex's copy, measured on a middle copy of the window.
    fn compute_guard(&self) -> i64 {
        let mid = (self.lo + self.hi) / 2;
        let nb = self.ext.base.vertices.len();
        let mut g = 1i64;
        for x in 0..nb {
            if let Some(w) = self.vertex(x, mid) {
                let p = crate::rep::projective(&self.algebra, w);
                let i = crate::rep::injective(&self.algebra, w);
                for m in [&p, &i] {
                    for (v, &d) in m.dims.iter().enumerate() {
                        if d > 0 {
                            let (_, c) = self.vinfo[v];
                            g = g.max((c - mid).abs());
                        }
                    }
                }
            }
        }
        g
    }

    pub fn guard(&self) -> i64 {
        self.guard
    }

    /// Copy span of a module's support; None for the zero module.
    pub fn support_copies(&self, m: &Representation) -> Option<(i64, i64)> {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for (v, &d) in m.dims.iter().enumerate() {
            if d > 0 {
                let (_, c) = self.vinfo[v];
                lo = lo.min(c);
                hi = hi.max(c);
            }
        }
        if lo > hi {
            None
        } else {
            Some((lo, hi))
        }
    }

    /// True when the inverse translate of this module is reliable inside the
    /// window: the injective copresentation stretches up-copy (2 guards) and
    /// its Nakayama preimage one guard down-copy.
    pub fn tau_inv_safe(&self, m: &Representation) -> bool {
        match self.support_copies(m) {
            None => true,
            Some((slo, shi)) => slo - self.guard >= self.lo && shi + 2 * self.guard <= self.hi,
        }
    }

    /// Dual safety for the translate itself.
    pub fn tau_safe(&self, m: &Representation) -> bool {
        match self.support_copies(m) {
            None => true,
            Some((slo, shi)) => slo - 2 * self.guard >= self.lo && shi + self.guard <= self.hi,
        }
    }

    /// Place a module over the base algebra at the given copy.
    pub fn lift(&self, m: &Representation, copy: i64) -> Representation {
        assert!(Arc::ptr_eq(&m.algebra, &self.base_algebra));
        let mut dims = vec![0usize; self.algebra.n];
        for x in 0..self.ext.base.vertices.len() {
            dims[self.vmap[&(x, copy)]] = m.dims[x];
        }
        let mut mats: Vec<Mat> = self
            .quiver
            .arrows
            .iter()
            .map(|a| Mat::zero(dims[a.src], dims[a.tgt]))
            .collect();
        for (wa, &(ta, c)) in self.ainfo.iter().enumerate() {
            if c == copy && !self.ext.is_new_arrow(ta) {
                mats[wa] = m.mats[ta].clone();
            }
        }
        Representation::new_unchecked(self.algebra.clone(), dims, mats)
    }

    /// Shift a module k copies (positive k moves toward higher copies);
    /// None if the support would leave the window.
    pub fn shift(&self, m: &Representation, k: i64) -> Option<Representation> {
        if k == 0 {
            return Some(m.clone());
        }
        let mut dims = vec![0usize; self.algebra.n];
        for (v, &d) in m.dims.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let (x, c) = self.vinfo[v];
            dims[*self.vmap.get(&(x, c + k))?] = d;
        }
        let mut mats: Vec<Mat> = self
            .quiver
            .arrows
            .iter()
            .map(|a| Mat::zero(dims[a.src], dims[a.tgt]))
            .collect();
        for (wa, &(ta, c)) in self.ainfo.iter().enumerate() {
            if m.mats[wa].rows == 0 && m.mats[wa].cols == 0 {
                continue;
            }
            if m.mats[wa].is_zero() {
                continue;
            }
            let target = self.amap.get(&(ta, c + k))?;
            mats[*target] = m.mats[wa].clone();
        }
        Some(Representation::new_unchecked(self.algebra.clone(), dims, mats))
    }

    /// The shift toward lower copies (the covering automorphism direction).
    pub fn phi(&self, m: &Representation) -> Option<Representation> {
        self.shift(m, -1)
    }

    /// Collapse the copies: the pushdown to the extension algebra.
    pub fn pushdown(&self, m: &Representation) -> Representation {
        let talg = &self.tilde_algebra;
        let nb = self.ext.base.vertices.len();
        // offsets of each window vertex inside the collapsed space
        let mut offsets = vec![0usize; self.algebra.n];
        let mut dims = vec![0usize; nb];
        for i in self.lo..=self.hi {
            for x in 0..nb {
                let w = self.vmap[&(x, i)];
                offsets[w] = dims[x];
                dims[x] += m.dims[w];
            }
        }
        let mut mats = Vec::new();
        for (ta, a) in self.ext.tilde.arrows.iter().enumerate() {
            let mut mat = Mat::zero(dims[a.src], dims[a.tgt]);
            for i in self.lo..=self.hi {
                if let Some(&wa) = self.amap.get(&(ta, i)) {
                    let wsrc = self.quiver.arrows[wa].src;
                    let wtgt = self.quiver.arrows[wa].tgt;
                    let block = &m.mats[wa];
                    for r in 0..block.rows {
                        for cc in 0..block.cols {
                            mat[(offsets[wsrc] + r, offsets[wtgt] + cc)] = block[(r, cc)].clone();
                        }
                    }
                }
            }
            mats.push(mat);
        }
        Representation::new_unchecked(talg.clone(), dims, mats)
    }

    /// Move a module to a window with a different copy range (same extension).
    pub fn transport(&self, m: &Representation, other: &Window) -> Option<Representation> {
        let mut dims = vec![0usize; other.algebra.n];
        for (v, &d) in m.dims.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let (x, c) = self.vinfo[v];
            dims[*other.vmap.get(&(x, c))?] = d;
        }
        let mut mats: Vec<Mat> = other
            .quiver
            .arrows
            .iter()
            .map(|a| Mat::zero(dims[a.src], dims[a.tgt]))
            .collect();
        for (wa, &(ta, c)) in self.ainfo.iter().enumerate() {
            if m.mats[wa].is_zero() {
                continue;
            }
            let target = other.amap.get(&(ta, c))?;
            mats[*target] = m.mats[wa].clone();
        }
        Some(Representation::new_unchecked(other.algebra.clone(), dims, mats))
    }

    /// The quiver obtained by collapsing the copies; together with the lifted
    /// relations it must reproduce the extension's bound quiver.
    pub fn phi_quotient_quiver(&self) -> BoundQuiver {
        self.ext.tilde.clone()
    }
}
