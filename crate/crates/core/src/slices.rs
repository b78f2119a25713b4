//! Local slices in a repetitive-algebra window: slice quivers, homotopy
//! moves, rightmost slices, completions at strong sinks, reflections (with
//! the replacement projectives of the next copy) and reflections of the
//! underlying tilted algebras. Coreflections run through the opposite window.

use crate::algebra::{quotient_by_ideal, Quotient};
use crate::extension::{cluster_repetitive, ExtensionError, Window};
use crate::matrix::RowSpace;
use crate::quiver::BoundQuiver;
use crate::rep::{
    self, annihilator, hom_basis, hom_compose, injective, is_isomorphic, projective, restrict,
    socle, Representation,
};
use crate::scalar::K;
use crate::translate::{tau, tau_inverse};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SliceError {
    #[error("module {0} is not a source of the slice")]
    NotASource(usize),
    #[error("module {0} is injective over the support algebra")]
    IsInjective(usize),
    #[error("module {0} is not projective-free to move")]
    IsProjective(usize),
    #[error("vertex is not a strong sink")]
    NotStrongSink,
    #[error("slice quiver has an arrow of multiplicity {0} > 1: not of tree type")]
    NotTreeType(usize),
    #[error("no rightmost slice within {0} moves")]
    NoRightmostSlice(usize),
    #[error(transparent)]
    Window(#[from] ExtensionError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error(transparent)]
    Rep(#[from] rep::RepError),
    #[error(transparent)]
    Translate(#[from] crate::translate::TranslateError),
    #[error("isomorphism test inconclusive while flagging injectives")]
    Inconclusive,
}

/// A slice: its modules (over the window algebra) and its quiver.
#[derive(Clone, Debug)]
pub struct SliceModules {
    pub mods: Vec<Representation>,
    pub arrows: Vec<(usize, usize)>,
}

impl SliceModules {
    pub fn sources(&self) -> Vec<usize> {
        (0..self.mods.len())
            .filter(|&i| self.arrows.iter().all(|&(_, t)| t != i))
            .collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.mods.len())
            .filter(|&i| self.arrows.iter().all(|&(s, _)| s != i))
            .collect()
    }

    pub fn successors_of(&self, i: usize) -> Vec<usize> {
        self.arrows.iter().filter(|&&(s, _)| s == i).map(|&(_, t)| t).collect()
    }

    pub fn predecessors_of(&self, i: usize) -> Vec<usize> {
        self.arrows.iter().filter(|&&(_, t)| t == i).map(|&(s, _)| s).collect()
    }
}

/// The slice quiver of a family of bricks: arrows are irreducible maps inside
/// the additive hull, computed as rad/rad^2 of the endomorphism algebra of
/// the direct sum.
pub fn slice_quiver(mods: &[Representation]) -> Result<Vec<(usize, usize)>, SliceError> {
    let m = mods.len();
    // pairwise hom bases
    let mut homs: Vec<Vec<Vec<Vec<crate::matrix::Mat>>>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            if i == j {
                row.push(Vec::new()); // rad End of a brick is zero
            } else {
                row.push(hom_basis(&mods[i], &mods[j]));
            }
        }
        homs.push(row);
    }
    let mut arrows = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i == j || homs[i][j].is_empty() {
                continue;
            }
            let flat: Vec<Vec<K>> = homs[i][j].iter().map(|f| flatten(f)).collect();
            let dim = flat[0].len();
            let mut total = RowSpace::new(dim);
            for f in &flat {
                total.insert(f);
            }
            let mut rad2 = RowSpace::new(dim);
            for l in 0..m {
                if l == i || l == j {
                    continue;
                }
                for f in &homs[i][l] {
                    for g in &homs[l][j] {
                        rad2.insert(&flatten(&hom_compose(f, g)));
                    }
                }
            }
            let irr = total.rank() - rad2.rank();
            if irr > 1 {
                return Err(SliceError::NotTreeType(irr));
            }
            if irr == 1 {
                arrows.push((i, j));
            }
        }
    }
    Ok(arrows)
}

fn flatten(f: &[crate::matrix::Mat]) -> Vec<K> {
    let mut out = Vec::new();
    for m in f {
        for i in 0..m.rows {
            for j in 0..m.cols {
                out.push(m[(i, j)].clone());
            }
        }
    }
    out
}

pub fn slice_from_modules(mods: Vec<Representation>) -> Result<SliceModules, SliceError> {
    let arrows = slice_quiver(&mods)?;
    Ok(SliceModules { mods, arrows })
}

/// The support algebra of a slice: the window modulo the slice annihilator.
pub fn support_algebra(window: &Window, slice: &SliceModules) -> Result<Quotient, SliceError> {
    let refs: Vec<&Representation> = slice.mods.iter().collect();
    let ann = annihilator(&window.algebra, &refs);
    Ok(quotient_by_ideal(&window.algebra, &ann)?)
}

/// For each slice module: Some(window vertex of y) when the module is the
/// injective I_y over the support algebra, None otherwise. Injectivity is
/// decided by an isomorphism test, never by dimension vectors alone.
pub fn injective_flags(
    window: &Window,
    slice: &SliceModules,
    quot: &Quotient,
    seed: u64,
) -> Result<Vec<Option<usize>>, SliceError> {
    let mut flags = Vec::with_capacity(slice.mods.len());
    for m in &slice.mods {
        let rb = restrict(m, quot)?;
        let soc = socle(&rb);
        if soc.total_dim() != 1 {
            flags.push(None);
            continue;
        }
        let v = soc.dims.iter().position(|&d| d > 0).unwrap();
        let inj = injective(&quot.algebra, v);
        match is_isomorphic(&rb, &inj, seed) {
            Ok(true) => flags.push(Some(quot.vertex_from_new[v])),
            Ok(false) => flags.push(None),
            Err(_) => return Err(SliceError::Inconclusive),
        }
    }
    let _ = window;
    Ok(flags)
}

/// Dual flags: Some(window vertex) when the module is projective over the
/// support algebra.
pub fn projective_flags(
    window: &Window,
    slice: &SliceModules,
    quot: &Quotient,
    seed: u64,
) -> Result<Vec<Option<usize>>, SliceError> {
    let mut flags = Vec::with_capacity(slice.mods.len());
    for m in &slice.mods {
        let rb = restrict(m, quot)?;
        let t = rep::top(&rb);
        if t.total_dim() != 1 {
            flags.push(None);
            continue;
        }
        let v = t.dims.iter().position(|&d| d > 0).unwrap();
        let p = projective(&quot.algebra, v);
        match is_isomorphic(&rb, &p, seed) {
            Ok(true) => flags.push(Some(quot.vertex_from_new[v])),
            Ok(false) => flags.push(None),
            Err(_) => return Err(SliceError::Inconclusive),
        }
    }
    let _ = window;
    Ok(flags)
}

/// Replace a non-injective source by its inverse translate (a homotopy move).
/// The translate is taken over the window; on complete slices of the support
/// algebra the two agree.
pub fn move_source(
    window: &Window,
    slice: &SliceModules,
    idx: usize,
    quot: &Quotient,
    seed: u64,
) -> Result<SliceModules, SliceError> {
    if !slice.sources().contains(&idx) {
        return Err(SliceError::NotASource(idx));
    }
    let flags = injective_flags(window, slice, quot, seed)?;
    if flags[idx].is_some() {
        return Err(SliceError::IsInjective(idx));
    }
    if !window.tau_inv_safe(&slice.mods[idx]) {
        return Err(SliceError::Window(ExtensionError::WindowTooSmall {
            lo: window.lo,
            hi: window.hi,
            what: "inverse translate of a slice source".into(),
        }));
    }
    let t = tau_inverse(&slice.mods[idx])?
        .module()
        .expect("non-injective over the window");
    let mut mods = slice.mods.clone();
    mods[idx] = t;
    let arrows = slice
        .arrows
        .iter()
        .map(|&(s, t2)| if s == idx { (t2, idx) } else { (s, t2) })
        .collect();
    Ok(SliceModules { mods, arrows })
}

/// Dual move: replace a non-projective sink by its translate.
pub fn move_sink(
    window: &Window,
    slice: &SliceModules,
    idx: usize,
    quot: &Quotient,
    seed: u64,
) -> Result<SliceModules, SliceError> {
    if !slice.sinks().contains(&idx) {
        return Err(SliceError::NotASource(idx));
    }
    let flags = projective_flags(window, slice, quot, seed)?;
    if flags[idx].is_some() {
        return Err(SliceError::IsProjective(idx));
    }
    if !window.tau_safe(&slice.mods[idx]) {
        return Err(SliceError::Window(ExtensionError::WindowTooSmall {
            lo: window.lo,
            hi: window.hi,
            what: "translate of a slice sink".into(),
        }));
    }
    let t = tau(&slice.mods[idx])?.module().expect("non-projective over the window");
    let mut mods = slice.mods.clone();
    mods[idx] = t;
    let arrows = slice
        .arrows
        .iter()
        .map(|&(s, t2)| if t2 == idx { (idx, s) } else { (s, t2) })
        .collect();
    Ok(SliceModules { mods, arrows })
}

pub struct RightmostOutcome {
    pub slice: SliceModules,
    pub moves: usize,
    /// indices of the moved nodes, in order (indices refer to slice slots)
    pub trail: Vec<usize>,
}

/// Iterate source moves until every source is injective over the support
/// algebra. The annihilator is invariant under homotopy moves, so the support
/// is computed once.
pub fn rightmost_slice(
    window: &Window,
    slice: &SliceModules,
    quot: &Quotient,
    cap: usize,
    seed: u64,
) -> Result<RightmostOutcome, SliceError> {
    let mut cur = slice.clone();
    let mut moves = 0usize;
    let mut trail = Vec::new();
    loop {
        let flags = injective_flags(window, &cur, quot, seed)?;
        let movable: Vec<usize> = cur
            .sources()
            .into_iter()
            .filter(|&i| flags[i].is_none())
            .collect();
        let Some(&idx) = movable.first() else {
            return Ok(RightmostOutcome { slice: cur, moves, trail });
        };
        if moves >= cap {
            return Err(SliceError::NoRightmostSlice(cap));
        }
        cur = move_source(window, &cur, idx, quot, seed)?;
        moves += 1;
        trail.push(idx);
    }
}

pub fn leftmost_slice(
    window: &Window,
    slice: &SliceModules,
    quot: &Quotient,
    cap: usize,
    seed: u64,
) -> Result<RightmostOutcome, SliceError> {
    let mut cur = slice.clone();
    let mut moves = 0usize;
    let mut trail = Vec::new();
    loop {
        let flags = projective_flags(window, &cur, quot, seed)?;
        let movable: Vec<usize> = cur
            .sinks()
            .into_iter()
            .filter(|&i| flags[i].is_none())
            .collect();
        let Some(&idx) = movable.first() else {
            return Ok(RightmostOutcome { slice: cur, moves, trail });
        };
        if moves >= cap {
            return Err(SliceError::NoRightmostSlice(cap));
        }
        cur = move_sink(window, &cur, idx, quot, seed)?;
        moves += 1;
        trail.push(idx);
    }
}

/// Strong sinks of the support algebra: base vertices x whose injective I_x
/// is a source of the rightmost slice. Returned sorted by vertex label,
/// paired with the slice index carrying I_x.
pub fn strong_sinks(
    window: &Window,
    slice_plus: &SliceModules,
    quot: &Quotient,
    seed: u64,
) -> Result<Vec<(usize, usize)>, SliceError> {
    let flags = injective_flags(window, slice_plus, quot, seed)?;
    let mut out = Vec::new();
    for i in slice_plus.sources() {
        if let Some(wv) = flags[i] {
            out.push((wv, i));
        }
    }
    out.sort_by(|a, b| {
        let (xa, ca) = window.vertex_info(a.0);
        let (xb, cb) = window.vertex_info(b.0);
        crate::quiver::label_cmp(&window.ext.base.vertices[xa], &window.ext.base.vertices[xb])
            .then(ca.cmp(&cb))
    });
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Completion {
    /// slice indices in G, in discovery order
    pub members: Vec<usize>,
    pub injectives: Vec<usize>,
    pub non_injectives: Vec<usize>,
}

#[derive(Debug)]
pub enum CompletionOutcome {
    Found(Completion),
    /// witness: the arrow (non-injective N) -> (injective I in G) violating
    /// the final condition
    DoesNotExist { from: usize, to: usize },
}

/// The completion G_x: smallest subquiver of the rightmost slice containing
/// I_x, closed under predecessors and under arrows out of its injectives;
/// fails when an arrow into one of its injectives starts at a non-injective.
pub fn completion(
    window: &Window,
    slice_plus: &SliceModules,
    quot: &Quotient,
    source_idx: usize,
    seed: u64,
) -> Result<CompletionOutcome, SliceError> {
    let flags = injective_flags(window, slice_plus, quot, seed)?;
    if !slice_plus.sources().contains(&source_idx) || flags[source_idx].is_none() {
        return Err(SliceError::NotStrongSink);
    }
    let mut in_g = vec![false; slice_plus.mods.len()];
    let mut queue = vec![source_idx];
    in_g[source_idx] = true;
    let mut members = vec![source_idx];
    while let Some(i) = queue.pop() {
        // (c): successors of injectives
        if flags[i].is_some() {
            for j in slice_plus.successors_of(i) {
                if !in_g[j] {
                    in_g[j] = true;
                    members.push(j);
                    queue.push(j);
                }
            }
        }
        // (b): predecessors of anything in G
        for j in slice_plus.predecessors_of(i) {
            if !in_g[j] {
                in_g[j] = true;
                members.push(j);
                queue.push(j);
            }
        }
    }
    // (d): arrows into injectives of G must come from injectives
    for &(s, t) in &slice_plus.arrows {
        if in_g[t] && flags[t].is_some() && flags[s].is_none() {
            return Ok(CompletionOutcome::DoesNotExist { from: s, to: t });
        }
    }
    members.sort_unstable();
    let injectives: Vec<usize> = members.iter().copied().filter(|&i| flags[i].is_some()).collect();
    let non_injectives: Vec<usize> =
        members.iter().copied().filter(|&i| flags[i].is_none()).collect();
    Ok(CompletionOutcome::Found(Completion { members, injectives, non_injectives }))
}

/// All admissible sinks (strong sinks whose completion exists), sorted by
/// vertex label. Entries with identical completions are grouped: reflecting
/// once at the group handles the simultaneous move.
pub fn admissible_sinks(
    window: &Window,
    slice_plus: &SliceModules,
    quot: &Quotient,
    seed: u64,
) -> Result<Vec<(usize, usize, Completion)>, SliceError> {
    let mut out = Vec::new();
    for (wv, idx) in strong_sinks(window, slice_plus, quot, seed)? {
        if let CompletionOutcome::Found(c) = completion(window, slice_plus, quot, idx, seed)? {
            out.push((wv, idx, c));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Reflection {
    pub slice: SliceModules,
    /// old slice index -> new slice index, for survivors
    pub kept: Vec<(usize, usize)>,
    /// old index of M in G (non-injective) -> new index of tau^{-1} M
    pub tau_moved: Vec<(usize, usize)>,
    /// old index of I_y -> (new index of the replacement projective, window
    /// vertex of y, window vertex of (y, copy+1))
    pub new_projectives: Vec<(usize, usize, usize, usize)>,
}

/// Reflect the rightmost slice at an admissible sink: remove the completion,
/// translate its non-injectives, and bring in the projectives of the next
/// copy at the injective positions.
pub fn reflect(
    window: &Window,
    slice_plus: &SliceModules,
    quot: &Quotient,
    comp: &Completion,
    seed: u64,
) -> Result<Reflection, SliceError> {
    let flags = injective_flags(window, slice_plus, quot, seed)?;
    let in_g = {
        let mut v = vec![false; slice_plus.mods.len()];
        for &i in &comp.members {
            v[i] = true;
        }
        v
    };
    let mut mods = Vec::new();
    let mut kept = Vec::new();
    let mut tau_moved = Vec::new();
    let mut new_projectives = Vec::new();
    let mut new_index = vec![usize::MAX; slice_plus.mods.len()];
    for i in 0..slice_plus.mods.len() {
        if !in_g[i] {
            new_index[i] = mods.len();
            kept.push((i, mods.len()));
            mods.push(slice_plus.mods[i].clone());
        }
    }
    for &i in &comp.non_injectives {
        if !window.tau_inv_safe(&slice_plus.mods[i]) {
            return Err(SliceError::Window(ExtensionError::WindowTooSmall {
                lo: window.lo,
                hi: window.hi,
                what: "inverse translate during reflection".into(),
            }));
        }
        let t = tau_inverse(&slice_plus.mods[i])?
            .module()
            .expect("non-injective over the window");
        new_index[i] = mods.len();
        tau_moved.push((i, mods.len()));
        mods.push(t);
    }
    for &i in &comp.injectives {
        let wv = flags[i].expect("flagged injective");
        let (y, c) = window.vertex_info(wv);
        let next = window.vertex(y, c + 1).ok_or(SliceError::Window(
            ExtensionError::WindowTooSmall {
                lo: window.lo,
                hi: window.hi,
                what: "replacement projective in the next copy".into(),
            },
        ))?;
        let pbar = projective(&window.algebra, next);
        if c + 1 - window.guard() < window.lo {
            return Err(SliceError::Window(ExtensionError::WindowTooSmall {
                lo: window.lo,
                hi: window.hi,
                what: "replacement projective too close to the boundary".into(),
            }));
        }
        new_index[i] = mods.len();
        new_projectives.push((i, mods.len(), wv, next));
        mods.push(pbar);
    }
    // Arrows of the reflected slice.
    let mut arrows = Vec::new();
    let inj = |i: usize| flags[i].is_some();
    for &(s, t) in &slice_plus.arrows {
        match (in_g[s], in_g[t]) {
            (false, false) => arrows.push((new_index[s], new_index[t])),
            (true, false) => {
                // M in G (necessarily non-injective) -> kept N flips
                debug_assert!(!inj(s));
                arrows.push((new_index[t], new_index[s]));
            }
            (false, true) => unreachable!("G is closed under predecessors"),
            (true, true) => {
                match (inj(s), inj(t)) {
                    (false, false) => arrows.push((new_index[s], new_index[t])),
                    (true, false) => {
                        // I_y -> M becomes tau^{-1}M -> P_y
                        arrows.push((new_index[t], new_index[s]));
                    }
                    (true, true) => arrows.push((new_index[s], new_index[t])),
                    (false, true) => unreachable!("arrows into injectives of G come from injectives"),
                }
            }
        }
    }
    Ok(Reflection { slice: SliceModules { mods, arrows }, kept, tau_moved, new_projectives })
}

/// The reflected tilted algebra: the extension modulo the annihilator of the
/// pushed-down slice, re-presented on the base vertices.
pub fn algebra_of_slice(window: &Window, slice: &SliceModules) -> Result<Quotient, SliceError> {
    let pushed: Vec<Representation> = slice.mods.iter().map(|m| window.pushdown(m)).collect();
    let refs: Vec<&Representation> = pushed.iter().collect();
    let ann = annihilator(&window.tilde_algebra, &refs);
    Ok(quotient_by_ideal(&window.tilde_algebra, &ann)?)
}

/// Deterministic key identifying the annihilator ideal of a slice inside the
/// extension algebra (the fibre-quotient identity, Cor 4.4 style).
pub fn annihilator_key(window: &Window, slice: &SliceModules) -> Vec<String> {
    let pushed: Vec<Representation> = slice.mods.iter().map(|m| window.pushdown(m)).collect();
    let refs: Vec<&Representation> = pushed.iter().collect();
    let ann = annihilator(&window.tilde_algebra, &refs);
    let mut space = RowSpace::new(window.tilde_algebra.dim);
    for e in &ann {
        space.insert(&window.tilde_algebra.elem_to_dense(e));
    }
    space
        .rows()
        .iter()
        .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
        .collect()
}

/// The opposite window plus module transport, used to run coreflections as
/// reflections of the opposite algebra.
pub struct OppositeWindow {
    pub window: Window,
}

pub fn opposite_window(window: &Window) -> Result<OppositeWindow, SliceError> {
    let base_op = window.ext.base.opposite();
    let tilde_op = window.ext.tilde.opposite();
    let ext_op = crate::extension::ExtensionData {
        base: base_op,
        tilde: tilde_op,
        new_arrows: window.ext.new_arrows.clone(),
    };
    let w = cluster_repetitive(&ext_op, -window.hi, -window.lo)?;
    Ok(OppositeWindow { window: w })
}

impl OppositeWindow {
    /// Transport a module across the duality: vertex (x, c) -> (x, -c),
    /// arrow matrices transposed.
    pub fn transport(&self, window: &Window, m: &Representation) -> Representation {
        let mut dims = vec![0usize; self.window.algebra.n];
        for (v, &d) in m.dims.iter().enumerate() {
            let (x, c) = window.vertex_info(v);
            dims[self.window.vertex(x, -c).expect("mirrored vertex")] = d;
        }
        let mut mats: Vec<crate::matrix::Mat> = self
            .window
            .quiver
            .arrows
            .iter()
            .map(|a| crate::matrix::Mat::zero(dims[a.src], dims[a.tgt]))
            .collect();
        for wa in 0..window.quiver.arrows.len() {
            let (ta, c) = window.arrow_info(wa);
            // original lift (a, c): new arrows map to op copy -c+1, original
            // to -c (so that the op lift again decreases its copy index)
            let op_copy = if window.ext.is_new_arrow(ta) { -c + 1 } else { -c };
            let target = self.window.arrow(ta, op_copy).expect("mirrored arrow");
            mats[target] = m.mats[wa].transpose();
        }
        Representation::new_unchecked(self.window.algebra.clone(), dims, mats)
    }

    /// Transport back.
    pub fn transport_back(&self, window: &Window, m: &Representation) -> Representation {
        let mut dims = vec![0usize; window.algebra.n];
        for (v, &d) in m.dims.iter().enumerate() {
            let (x, c) = self.window.vertex_info(v);
            dims[window.vertex(x, -c).expect("mirrored vertex")] = d;
        }
        let mut mats: Vec<crate::matrix::Mat> = window
            .quiver
            .arrows
            .iter()
            .map(|a| crate::matrix::Mat::zero(dims[a.src], dims[a.tgt]))
            .collect();
        for wa in 0..self.window.quiver.arrows.len() {
            let (ta, c) = self.window.arrow_info(wa);
            let orig_copy = if self.window.ext.is_new_arrow(ta) { -c + 1 } else { -c };
            let target = window.arrow(ta, orig_copy).expect("mirrored arrow");
            mats[target] = m.mats[wa].transpose();
        }
        Representation::new_unchecked(window.algebra.clone(), dims, mats)
    }

    pub fn transport_slice(&self, window: &Window, s: &SliceModules) -> SliceModules {
        SliceModules {
            mods: s.mods.iter().map(|m| self.transport(window, m)).collect(),
            arrows: s.arrows.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    pub fn transport_slice_back(&self, window: &Window, s: &SliceModules) -> SliceModules {
        SliceModules {
            mods: s.mods.iter().map(|m| self.transport_back(window, m)).collect(),
            arrows: s.arrows.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }
}

/// Coreflection at an admissible source: the dual surgery, computed by
/// reflecting over the opposite window.
pub fn coreflect(
    window: &Window,
    slice_minus: &SliceModules,
    base_vertex: usize,
    seed: u64,
) -> Result<SliceModules, SliceError> {
    let op = opposite_window(window)?;
    let s_op = op.transport_slice(window, slice_minus);
    let quot_op = support_algebra(&op.window, &s_op)?;
    // the mirrored slice is rightmost iff the original was leftmost
    let sinks = admissible_sinks(&op.window, &s_op, &quot_op, seed)?;
    let chosen = sinks
        .iter()
        .find(|(wv, _, _)| {
            let (x, _) = op.window.vertex_info(*wv);
            x == base_vertex
        })
        .ok_or(SliceError::NotStrongSink)?;
    let refl = reflect(&op.window, &s_op, &quot_op, &chosen.2, seed)?;
    Ok(op.transport_slice_back(window, &refl.slice))
}

/// Reflect a bound quiver algebra at an admissible sink without any strip
/// machinery: embed a complete slice, take the rightmost representative,
/// reflect, and present the quotient. Convenience used by tests and the CLI.
pub fn reflect_algebra_at(
    window: &Window,
    slice: &SliceModules,
    base_vertex: usize,
    cap: usize,
    seed: u64,
) -> Result<(BoundQuiver, SliceModules), SliceError> {
    let quot = support_algebra(window, slice)?;
    let rm = rightmost_slice(window, slice, &quot, cap, seed)?;
    let sinks = admissible_sinks(window, &rm.slice, &quot, seed)?;
    let chosen = sinks
        .iter()
        .find(|(wv, _, _)| {
            let (x, _) = window.vertex_info(*wv);
            x == base_vertex
        })
        .ok_or(SliceError::NotStrongSink)?;
    let refl = reflect(window, &rm.slice, &quot, &chosen.2, seed)?;
    let alg = algebra_of_slice(window, &refl.slice)?;
    Ok((alg.quiver, refl.slice))
}

/// Dual convenience: coreflect the leftmost representative at an admissible
/// source and present the resulting algebra.
pub fn coreflect_algebra_at(
    window: &Window,
    slice: &SliceModules,
    base_vertex: usize,
    cap: usize,
    seed: u64,
) -> Result<(BoundQuiver, SliceModules), SliceError> {
    let quot = support_algebra(window, slice)?;
    let lm = leftmost_slice(window, slice, &quot, cap, seed)?;
    let refl = coreflect(window, &lm.slice, base_vertex, seed)?;
    let alg = algebra_of_slice(window, &refl)?;
    Ok((alg.quiver, refl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::relation_extension;
    use crate::fixtures;
    use crate::quiver::parse_bound_quiver;
    use crate::rep::{loewy_string, simple, socle_quotient};

    pub fn window_for(text: &str, names: &[&str], lo: i64, hi: i64) -> Window {
        let q = parse_bound_quiver(text).unwrap();
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let ext = relation_extension(&q, Some(&names)).unwrap();
        cluster_repetitive(&ext, lo, hi).unwrap()
    }

    /// The rightmost slice of the D4 example, lifted at copy 0:
    /// { 4/23/1, 4/23, 4/2, 4/3 }.
    pub fn d4_sigma_plus(w: &Window) -> SliceModules {
        let i1 = injective(&w.base_algebra, 0);
        let m = socle_quotient(&i1);
        let i2 = injective(&w.base_algebra, 1);
        let i3 = injective(&w.base_algebra, 2);
        let mods = vec![
            w.lift(&i1, 0),
            w.lift(&m, 0),
            w.lift(&i2, 0),
            w.lift(&i3, 0),
        ];
        slice_from_modules(mods).unwrap()
    }

    #[test]
    fn d4_slice_quiver_is_a_star_path() {
        let w = window_for(fixtures::D4_SEED, &["s"], -1, 2);
        let s = d4_sigma_plus(&w);
        let mut arrows = s.arrows.clone();
        arrows.sort_unstable();
        assert_eq!(arrows, vec![(0, 1), (1, 2), (1, 3)]);
        assert_eq!(s.sources(), vec![0]);
    }

    #[test]
    fn d4_rightmost_is_fixed_point_and_strong_sink_is_1() {
        let w = window_for(fixtures::D4_SEED, &["s"], -1, 2);
        let s = d4_sigma_plus(&w);
        let quot = support_algebra(&w, &s).unwrap();
        let rm = rightmost_slice(&w, &s, &quot, 40, 0).unwrap();
        assert_eq!(rm.moves, 0, "already rightmost");
        let sinks = strong_sinks(&w, &rm.slice, &quot, 0).unwrap();
        assert_eq!(sinks.len(), 1);
        let (wv, idx) = sinks[0];
        assert_eq!(w.vertex_info(wv), (0, 0)); // vertex 1 at copy 0
        assert_eq!(idx, 0);
        // move_source on the injective source errors
        assert!(matches!(
            move_source(&w, &rm.slice, 0, &quot, 0),
            Err(SliceError::IsInjective(0))
        ));
    }

    #[test]
    fn d4_reflection_at_1() {
        let w = window_for(fixtures::D4_SEED, &["s"], -1, 2);
        let s = d4_sigma_plus(&w);
        let quot = support_algebra(&w, &s).unwrap();
        let comp = match completion(&w, &s, &quot, 0, 0).unwrap() {
            CompletionOutcome::Found(c) => c,
            _ => panic!("completion exists"),
        };
        // G_1 = { I_1, 4/23 }
        assert_eq!(comp.members, vec![0, 1]);
        assert_eq!(comp.injectives, vec![0]);
        assert_eq!(comp.non_injectives, vec![1]);
        let refl = reflect(&w, &s, &quot, &comp, 0).unwrap();
        let labels: Vec<String> =
            refl.slice.mods.iter().map(|m| loewy_string(&w.pushdown(m))).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        assert_eq!(sorted, vec!["1/4", "4", "4/2", "4/3"]);
        // P-bar_1 = 1/4: top S_1 (next copy), radical tau^{-1}(4/23) = S_4
        let (_, newi, _, next) = refl.new_projectives[0];
        let pbar = &refl.slice.mods[newi];
        assert_eq!(w.vertex_info(next), (0, 1));
        let t = crate::rep::top(pbar);
        assert_eq!(t.total_dim(), 1);
        let r = crate::rep::radical(pbar);
        let s4 = w.lift(&simple(&w.base_algebra, 3), 0);
        assert!(is_isomorphic(&r, &s4, 0).unwrap());
    }

    #[test]
    fn d4_second_reflection_moves_two_points_at_once() {
        let w = window_for(fixtures::D4_SEED, &["s"], -1, 3);
        let s = d4_sigma_plus(&w);
        let quot = support_algebra(&w, &s).unwrap();
        let comp = match completion(&w, &s, &quot, 0, 0).unwrap() {
            CompletionOutcome::Found(c) => c,
            _ => panic!(),
        };
        let refl = reflect(&w, &s, &quot, &comp, 0).unwrap();
        let s2 = refl.slice;
        let quot2 = support_algebra(&w, &s2).unwrap();
        let sinks = admissible_sinks(&w, &s2, &quot2, 0).unwrap();
        // strong sinks 2 and 3 with equal completions
        assert_eq!(sinks.len(), 2);
        let (v2, _, c2) = &sinks[0];
        let (v3, _, c3) = &sinks[1];
        assert_eq!(w.vertex_info(*v2).0, 1);
        assert_eq!(w.vertex_info(*v3).0, 2);
        assert_eq!(c2.members, c3.members, "G_2 = G_3");
        let refl2 = reflect(&w, &s2, &quot2, c2, 0).unwrap();
        let mut labels: Vec<String> =
            refl2.slice.mods.iter().map(|m| loewy_string(&w.pushdown(m))).collect();
        labels.sort();
        assert_eq!(labels, vec!["1", "1/4", "2/1", "3/1"]);
    }

    #[test]
    fn annihilator_invariance_under_moves() {
        // moving a non-injective source keeps the annihilator fixed
        let w = window_for(fixtures::A5_SEED, &["g", "n"], -1, 3);
        let s = a5_sigma(&w);
        let quot = support_algebra(&w, &s).unwrap();
        let key0 = annihilator_key(&w, &s);
        // 4 = S4 is a non-injective... S4 is not a source here; instead move
        // backwards: check invariance through rightmost (no moves needed) and
        // through the reflected slice NOT being homotopic. Simpler: move the
        // source of the A2 slice.
        let _ = quot;
        let w2 = window_for(fixtures::A2, &[], -1, 2);
        let p1 = w2.lift(&projective(&w2.base_algebra, 0), 0);
        let p2 = w2.lift(&projective(&w2.base_algebra, 1), 0);
        let s2 = slice_from_modules(vec![p1, p2]).unwrap();
        let quot2 = support_algebra(&w2, &s2).unwrap();
        let k_before = annihilator_key(&w2, &s2);
        let moved = move_source(&w2, &s2, 0, &quot2, 0).unwrap();
        let k_after = annihilator_key(&w2, &moved);
        assert_eq!(k_before, k_after);
        let _ = key0;
    }

    /// The rightmost complete slice of the A5 seed: { 4/3/2, 4/3, 45/3, 4, 1/4 }.
    pub fn a5_sigma(w: &Window) -> SliceModules {
        let ba = &w.base_algebra;
        let p4 = projective(ba, 3);
        let m43 = socle_quotient(&p4); // 4/3
        let i3 = injective(ba, 2); // 45/3
        let s4 = simple(ba, 3);
        let p1 = projective(ba, 0); // 1/4
        let mods = vec![
            w.lift(&p4, 0),
            w.lift(&m43, 0),
            w.lift(&i3, 0),
            w.lift(&s4, 0),
            w.lift(&p1, 0),
        ];
        slice_from_modules(mods).unwrap()
    }

    #[test]
    fn a5_slice_is_a_chain() {
        let w = window_for(fixtures::A5_SEED, &["g", "n"], -1, 3);
        let s = a5_sigma(&w);
        let mut arrows = s.arrows.clone();
        arrows.sort_unstable();
        assert_eq!(arrows, vec![(0, 1), (1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn a5_reflection_at_2() {
        let w = window_for(fixtures::A5_SEED, &["g", "n"], -1, 3);
        let s = a5_sigma(&w);
        let quot = support_algebra(&w, &s).unwrap();
        let sinks = admissible_sinks(&w, &s, &quot, 0).unwrap();
        assert_eq!(sinks.len(), 1);
        let (wv, _, comp) = &sinks[0];
        assert_eq!(w.vertex_info(*wv), (1, 0)); // strong sink 2
        assert_eq!(comp.members.len(), 2); // { 4/3/2, 4/3 }
        let refl = reflect(&w, &s, &quot, comp, 0).unwrap();
        let mut labels: Vec<String> =
            refl.slice.mods.iter().map(|m| loewy_string(&w.pushdown(m))).collect();
        labels.sort();
        assert_eq!(labels, vec!["1/4", "2/5", "4", "45/3", "5"]);
    }

    #[test]
    fn a5_chain_to_sigma3() {
        let w = window_for(fixtures::A5_SEED, &["g", "n"], -1, 3);
        let s = a5_sigma(&w);
        let quot = support_algebra(&w, &s).unwrap();
        let sinks = admissible_sinks(&w, &s, &quot, 0).unwrap();
        let refl = reflect(&w, &s, &quot, &sinks[0].2, 0).unwrap();
        let s2 = refl.slice;
        let quot2 = support_algebra(&w, &s2).unwrap();
        let rm = rightmost_slice(&w, &s2, &quot2, 40, 0).unwrap();
        assert_eq!(rm.moves, 0, "sigma_2 Sigma is already rightmost");
        let sinks2 = admissible_sinks(&w, &s2, &quot2, 0).unwrap();
        assert_eq!(sinks2.len(), 1);
        assert_eq!(w.vertex_info(sinks2[0].0), (2, 0)); // strong sink 3
        let refl2 = reflect(&w, &s2, &quot2, &sinks2[0].2, 0).unwrap();
        let mut labels: Vec<String> =
            refl2.slice.mods.iter().map(|m| loewy_string(&w.pushdown(m))).collect();
        labels.sort();
        assert_eq!(labels, vec!["1", "1/4", "2", "2/5", "3/12"]);
        // the reflected algebra sigma_2 C: arrows a, b, n, l; relations a*b, n*l
        let alg2 = algebra_of_slice(&w, &s2).unwrap();
        let mut names: Vec<&str> = alg2.quiver.arrows.iter().map(|a| a.name.as_str()).collect();
        names.sort_unstable();
        assert_eq!(names, vec!["a", "b", "l", "n"]);
        assert_eq!(alg2.quiver.relation_set(), vec!["a*b", "n*l"]);
    }

    #[test]
    fn a2_reflection_with_injective_successor_chain() {
        // Over hereditary A2 the completion at 1 swallows the whole slice and
        // both replacement projectives appear in the next copy.
        let w = window_for(fixtures::A2, &[], -1, 2);
        let i1 = injective(&w.base_algebra, 0); // 2/1
        let i2 = injective(&w.base_algebra, 1); // S2
        let s = slice_from_modules(vec![w.lift(&i1, 0), w.lift(&i2, 0)]).unwrap();
        let quot = support_algebra(&w, &s).unwrap();
        let sinks = admissible_sinks(&w, &s, &quot, 0).unwrap();
        assert_eq!(sinks.len(), 1);
        assert_eq!(w.vertex_info(sinks[0].0), (0, 0));
        let comp = &sinks[0].2;
        assert_eq!(comp.members, vec![0, 1]);
        assert_eq!(comp.injectives.len(), 2);
        let refl = reflect(&w, &s, &quot, comp, 0).unwrap();
        // new slice = { P_1@1 = S_1@1, P_2@1 = 2/1@1 }
        let mut infos: Vec<(usize, i64)> = refl
            .new_projectives
            .iter()
            .map(|&(_, _, _, next)| w.vertex_info(next))
            .collect();
        infos.sort();
        assert_eq!(infos, vec![(0, 1), (1, 1)]);
        // structure check: rad P-bar_2 = P-bar_1
        let p2bar = projective(&w.algebra, w.vertex(1, 1).unwrap());
        let r = crate::rep::radical(&p2bar);
        let p1bar = projective(&w.algebra, w.vertex(0, 1).unwrap());
        assert!(is_isomorphic(&r, &p1bar, 0).unwrap());
    }

    #[test]
    fn coreflect_inverts_reflect_on_d4() {
        let w = window_for(fixtures::D4_SEED, &["s"], -2, 3);
        let s = d4_sigma_plus(&w);
        let quot = support_algebra(&w, &s).unwrap();
        let comp = match completion(&w, &s, &quot, 0, 0).unwrap() {
            CompletionOutcome::Found(c) => c,
            _ => panic!(),
        };
        let refl = reflect(&w, &s, &quot, &comp, 0).unwrap();
        // coreflect at the admissible source 1 recovers the original slice
        let back = coreflect(&w, &refl.slice, 0, 0).unwrap();
        let match_count = back
            .mods
            .iter()
            .filter(|m| s.mods.iter().any(|o| is_isomorphic(m, o, 0).unwrap()))
            .count();
        assert_eq!(match_count, 4, "coreflection recovers Sigma^+");
    }

    #[test]
    fn d5_completions_match_reference_sets() {
        let w = window_for(fixtures::D5_SEED, &["s", "r"], -1, 2);
        let ba = &w.base_algebra;
        // Sigma^+ = { I_1 = 3/2/1, 3/2, I_4 = 3/4, I_2 = 5/3/2, 3 }
        let i1 = injective(ba, 0);
        assert_eq!(loewy_string(&i1), "3/2/1");
        let m32 = socle_quotient(&i1);
        assert_eq!(loewy_string(&m32), "3/2");
        let i4 = injective(ba, 3);
        assert_eq!(loewy_string(&i4), "3/4");
        let i2 = injective(ba, 1);
        assert_eq!(loewy_string(&i2), "5/3/2");
        let s3 = simple(ba, 2);
        let s = slice_from_modules(vec![
            w.lift(&i1, 0),
            w.lift(&m32, 0),
            w.lift(&i4, 0),
            w.lift(&i2, 0),
            w.lift(&s3, 0),
        ])
        .unwrap();
        let quot = support_algebra(&w, &s).unwrap();
        let sinks = strong_sinks(&w, &s, &quot, 0).unwrap();
        let verts: Vec<usize> = sinks.iter().map(|&(wv, _)| w.vertex_info(wv).0).collect();
        assert_eq!(verts, vec![0, 3], "strong sinks 1 and 4");
        // G_1 = { 3/2/1, 3/2 }
        match completion(&w, &s, &quot, sinks[0].1, 0).unwrap() {
            CompletionOutcome::Found(c) => {
                let mut lab: Vec<String> =
                    c.members.iter().map(|&i| loewy_string(&w.pushdown(&s.mods[i]))).collect();
                lab.sort();
                assert_eq!(lab, vec!["3/2", "3/2/1"]);
            }
            _ => panic!("G_1 exists"),
        }
        // G_4 = { 3/2/1, 3/2, 3/4, 3 }
        match completion(&w, &s, &quot, sinks[1].1, 0).unwrap() {
            CompletionOutcome::Found(c) => {
                let mut lab: Vec<String> =
                    c.members.iter().map(|&i| loewy_string(&w.pushdown(&s.mods[i]))).collect();
                lab.sort();
                assert_eq!(lab, vec!["3", "3/2", "3/2/1", "3/4"]);
            }
            _ => panic!("G_4 exists"),
        }
    }

    #[test]
    fn a2_tilde_completion_does_not_exist() {
        let w = window_for(fixtures::A2T_SEED, &["s"], -1, 1);
        let ba = &w.base_algebra;
        let i1 = injective(ba, 0);
        assert_eq!(i1.dims, vec![1, 2, 1]);
        let s2 = simple(ba, 1);
        let i2 = injective(ba, 1);
        let s = slice_from_modules(vec![w.lift(&i1, 0), w.lift(&s2, 0), w.lift(&i2, 0)]).unwrap();
        let quot = support_algebra(&w, &s).unwrap();
        let sinks = strong_sinks(&w, &s, &quot, 0).unwrap();
        assert_eq!(sinks.len(), 1);
        assert_eq!(w.vertex_info(sinks[0].0).0, 0);
        match completion(&w, &s, &quot, sinks[0].1, 0).unwrap() {
            CompletionOutcome::DoesNotExist { .. } => {}
            CompletionOutcome::Found(c) => panic!("G_1 should not exist, got {:?}", c.members),
        }
    }

    #[test]
    fn d4_no_rightmost_error_is_not_triggered_on_finite_type() {
        let w = window_for(fixtures::D4_SEED, &["s"], -1, 2);
        let s = d4_sigma_plus(&w);
        let quot = support_algebra(&w, &s).unwrap();
        assert!(rightmost_slice(&w, &s, &quot, 0, 0).is_ok(), "already a fixpoint at cap 0");
    }

    #[test]
    fn d4_sigma_plus_has_unique_injective_source_no_moves() {
        let w = window_for(fixtures::D4_SEED, &["s"], -1, 2);
        let s = d4_sigma_plus(&w);
        let quot = support_algebra(&w, &s).unwrap();
        // from Sigma^+ no source move is possible: unique source is injective
        for i in s.sources() {
            assert!(matches!(
                move_source(&w, &s, i, &quot, 0),
                Err(SliceError::IsInjective(_))
            ));
        }
    }

    #[test]
    fn a2_full_completion_reflection_reproduces_the_algebra() {
        // when the completion swallows the whole slice, the reflected
        // algebra is the shift of the original
        let w = window_for(fixtures::A2, &[], -1, 2);
        let i1 = injective(&w.base_algebra, 0);
        let i2 = injective(&w.base_algebra, 1);
        let s = slice_from_modules(vec![w.lift(&i1, 0), w.lift(&i2, 0)]).unwrap();
        let (quiver, _) = reflect_algebra_at(&w, &s, 0, 10, 0).unwrap();
        let expected = parse_bound_quiver(fixtures::A2).unwrap();
        assert_eq!(quiver.print(), expected.print());
    }

    #[test]
    fn leftmost_slice_of_d4() {
        // from the rightmost slice, the leftmost one is reached by sink
        // moves: { 2/1, 3/1, 23/1, 4/23/1 }
        let w = window_for(fixtures::D4_SEED, &["s"], -2, 2);
        let s = d4_sigma_plus(&w);
        let quot = support_algebra(&w, &s).unwrap();
        let lm = leftmost_slice(&w, &s, &quot, 20, 0).unwrap();
        let mut labels: Vec<String> =
            lm.slice.mods.iter().map(|m| loewy_string(&w.pushdown(m))).collect();
        labels.sort();
        assert_eq!(labels, vec!["2/1", "23/1", "3/1", "4/23/1"]);
        assert_eq!(lm.moves, 5);
    }

    #[test]
    fn coreflect_algebra_matches_opposite_reflection() {
        // duality sanity on the D5 seed: coreflecting at a source is the
        // opposite of reflecting the opposite algebra
        let w = window_for(fixtures::D5_SEED, &["s", "r"], -2, 2);
        let ba = &w.base_algebra;
        let i1 = injective(ba, 0);
        let s = slice_from_modules(vec![
            w.lift(&i1, 0),
            w.lift(&socle_quotient(&i1), 0),
            w.lift(&injective(ba, 3), 0),
            w.lift(&injective(ba, 1), 0),
            w.lift(&simple(ba, 2), 0),
        ])
        .unwrap();
        // sources of the leftmost slice are projective; source vertex 5
        // (P_5 is the unique source of the leftmost slice of this seed)
        let quot = support_algebra(&w, &s).unwrap();
        let lm = leftmost_slice(&w, &s, &quot, 30, 0).unwrap();
        let quot2 = support_algebra(&w, &lm.slice).unwrap();
        let pf = projective_flags(&w, &lm.slice, &quot2, 0).unwrap();
        let sink_vertices: Vec<usize> = lm
            .slice
            .sinks()
            .into_iter()
            .filter_map(|i| pf[i].map(|wv| w.vertex_info(wv).0))
            .collect();
        assert!(!sink_vertices.is_empty(), "leftmost slice has projective sinks");
        let x = sink_vertices[0];
        let co = coreflect(&w, &lm.slice, x, 0).unwrap();
        // compare against the reflection over the opposite window, node by node
        let op = opposite_window(&w).unwrap();
        let s_op = op.transport_slice(&w, &lm.slice);
        let quot_op = support_algebra(&op.window, &s_op).unwrap();
        let sinks_op = admissible_sinks(&op.window, &s_op, &quot_op, 0).unwrap();
        let chosen = sinks_op
            .iter()
            .find(|(wv, _, _)| op.window.vertex_info(*wv).0 == x)
            .unwrap();
        let refl_op = reflect(&op.window, &s_op, &quot_op, &chosen.2, 0).unwrap();
        let back = op.transport_slice_back(&w, &refl_op.slice);
        for m in &co.mods {
            assert!(
                back.mods.iter().any(|o| is_isomorphic(o, m, 0).unwrap()),
                "node-by-node duality"
            );
        }
    }

    #[test]
    fn annihilator_of_a5_slice_is_generated_by_the_two_new_arrows() {
        // over the two-cycle algebra, the slice annihilator is exactly the
        // ideal generated by the arrows g and n
        let q = parse_bound_quiver(fixtures::A5_CYCLIC).unwrap();
        let a = std::sync::Arc::new(
            crate::algebra::path_algebra(&q, crate::algebra::default_length_cap(&q)).unwrap(),
        );
        // slice modules over the cyclic algebra: all are annihilated by g, n
        let p4 = crate::rep::projective(&a, 3);
        let mods = vec![
            p4.clone(),
            socle_quotient(&p4),
            injective(&a, 2),
            simple(&a, 3),
            crate::rep::projective(&a, 0),
        ];
        let refs: Vec<&crate::rep::Representation> = mods.iter().collect();
        let ann = crate::rep::annihilator(&a, &refs);
        let mut ann_space = crate::matrix::RowSpace::new(a.dim);
        for e in &ann {
            ann_space.insert(&a.elem_to_dense(e));
        }
        let gens = vec![
            a.arrow_class(q.arrow_index("g").unwrap()),
            a.arrow_class(q.arrow_index("n").unwrap()),
        ];
        let closure = crate::algebra::ideal_closure(&a, &gens);
        assert_eq!(ann_space.rank(), closure.rank);
        for e in closure.elements() {
            assert!(ann_space.contains(&a.elem_to_dense(&e)));
        }
    }
}
