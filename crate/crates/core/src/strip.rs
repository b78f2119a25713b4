//! Knitting of the transjective component over a repetitive-algebra window:
//! strip nodes, mesh arrows, translation links, hole markers at the deleted
//! positions, the shift-quotient view, slice distances, and enumeration of
//! fibre quotients by reflections and coreflections.

use crate::algebra::Quotient;
use crate::extension::{cluster_repetitive, ExtensionData, ExtensionError, Window};
use crate::quiver::BoundQuiver;
use crate::rep::{is_isomorphic, loewy_string, Representation};
use crate::slices::{
    self, admissible_sinks, injective_flags, move_source, opposite_window, slice_from_modules,
    support_algebra, OppositeWindow, SliceError, SliceModules,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StripError {
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error(transparent)]
    Window(#[from] ExtensionError),
    #[error("step cap exceeded ({0}); partial strip returned where possible")]
    CapExceeded(usize),
    #[error("no admissible sink (input not of tree type?)")]
    NoAdmissibleSink,
    #[error("not a local slice: {0}")]
    NotASlice(String),
}

#[derive(Clone, Debug)]
pub struct StripNode {
    pub module: Representation,
    pub label: String,
    pub dimvec: Vec<usize>,
    pub projective: bool,
    pub injective: bool,
}

#[derive(Clone, Debug)]
pub struct Hole {
    pub base_vertex: usize,
    pub copy: i64,
    pub inj_node: usize,
    pub proj_node: usize,
    pub in_nodes: Vec<usize>,
    pub out_nodes: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Frontier {
    pub nodes: Vec<usize>,
    pub slice: SliceModules,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnitStop {
    AllSourcesInjective,
    AllSinksProjective,
    StepCap,
    PhiRepetition,
}

#[derive(Clone, Copy, Debug)]
pub struct StripConfig {
    pub seed: u64,
    pub knit_cap: usize,
    pub reflect_cap: usize,
    pub copy_cap: i64,
    pub periods: usize,
}

impl StripConfig {
    pub fn for_base(n: usize) -> Self {
        StripConfig {
            seed: 0,
            knit_cap: 5 * n,
            reflect_cap: 4 * n,
            copy_cap: 16,
            periods: 1,
        }
    }
}

pub struct Strip {
    pub window: Window,
    pub nodes: Vec<StripNode>,
    pub arrows: Vec<(usize, usize)>,
    /// (M, tau^{-1} M) pairs: the complete meshes of the strip.
    pub tau_links: Vec<(usize, usize)>,
    pub holes: Vec<Hole>,
    pub hole_edges: Vec<(usize, usize)>, // hole -> hole
    pub frontier: Frontier,
    pub left_frontier: Frontier,
    pub cfg: StripConfig,
    quot: Quotient,
    /// recorded frontiers after each reflection (node id lists)
    pub slice_log: Vec<Vec<usize>>,
    pub repetitions: usize,
}

impl Strip {
    pub fn base_n(&self) -> usize {
        self.window.ext.base.vertices.len()
    }

    fn push_node(&mut self, module: Representation, projective: bool) -> usize {
        let pushed = self.window.pushdown(&module);
        let label = loewy_string(&pushed);
        let dimvec = pushed.dims.clone();
        self.nodes.push(StripNode { module, label, dimvec, projective, injective: false });
        self.nodes.len() - 1
    }

    pub fn out_neighbors(&self, n: usize) -> Vec<usize> {
        self.arrows.iter().filter(|&&(s, _)| s == n).map(|&(_, t)| t).collect()
    }

    pub fn in_neighbors(&self, n: usize) -> Vec<usize> {
        self.arrows.iter().filter(|&&(_, t)| t == n).map(|&(s, _)| s).collect()
    }

    /// Locate an existing node isomorphic (over the window) to the module.
    pub fn find_node(&self, m: &Representation) -> Option<usize> {
        for (i, n) in self.nodes.iter().enumerate() {
            if n.module.dims == m.dims && is_isomorphic(&n.module, m, self.cfg.seed).unwrap_or(false)
            {
                return Some(i);
            }
        }
        None
    }
}

pub fn init_from_slice(
    window: Window,
    slice: SliceModules,
    cfg: StripConfig,
) -> Result<Strip, StripError> {
    let n = window.ext.base.vertices.len();
    if slice.mods.len() != n {
        return Err(StripError::NotASlice(format!(
            "LS3: slice has {} modules, rank K0 is {}",
            slice.mods.len(),
            n
        )));
    }
    let quot = support_algebra(&window, &slice)?;
    let mut strip = Strip {
        window,
        nodes: Vec::new(),
        arrows: Vec::new(),
        tau_links: Vec::new(),
        holes: Vec::new(),
        hole_edges: Vec::new(),
        frontier: Frontier { nodes: Vec::new(), slice: slice.clone() },
        left_frontier: Frontier { nodes: Vec::new(), slice: slice.clone() },
        cfg,
        quot,
        slice_log: Vec::new(),
        repetitions: 0,
    };
    let mut ids = Vec::new();
    for m in &slice.mods {
        ids.push(strip.push_node(m.clone(), false));
    }
    for &(s, t) in &slice.arrows {
        strip.arrows.push((ids[s], ids[t]));
    }
    strip.frontier = Frontier { nodes: ids.clone(), slice: slice.clone() };
    strip.left_frontier = Frontier { nodes: ids, slice };
    strip.slice_log.push(strip.frontier.nodes.clone());
    Ok(strip)
}

impl Strip {
    fn grow_window(&mut self) -> Result<(), StripError> {
        let new_lo = self.window.lo - 3;
        let new_hi = self.window.hi + 3;
        if new_hi - new_lo + 1 > 2 * self.cfg.copy_cap + 1 {
            return Err(StripError::Window(ExtensionError::CopyCapExceeded(self.cfg.copy_cap)));
        }
        let bigger = cluster_repetitive(&self.window.ext, new_lo, new_hi)?;
        for node in self.nodes.iter_mut() {
            node.module = self
                .window
                .transport(&node.module, &bigger)
                .expect("transport into larger window");
        }
        let transport_frontier = |f: &Frontier, w: &Window, b: &Window| -> Frontier {
            Frontier {
                nodes: f.nodes.clone(),
                slice: SliceModules {
                    mods: f
                        .slice
                        .mods
                        .iter()
                        .map(|m| w.transport(m, b).expect("transport"))
                        .collect(),
                    arrows: f.slice.arrows.clone(),
                },
            }
        };
        self.frontier = transport_frontier(&self.frontier, &self.window, &bigger);
        self.left_frontier = transport_frontier(&self.left_frontier, &self.window, &bigger);
        self.window = bigger;
        self.quot = support_algebra(&self.window, &self.frontier.slice)?;
        Ok(())
    }

    /// Run an operation, growing the window (up to the cap) when it reports
    /// WindowTooSmall.
    fn with_growth<T>(
        &mut self,
        mut op: impl FnMut(&mut Self) -> Result<T, StripError>,
    ) -> Result<T, StripError> {
        loop {
            match op(self) {
                Err(StripError::Slice(SliceError::Window(ExtensionError::WindowTooSmall {
                    ..
                })))
                | Err(StripError::Window(ExtensionError::WindowTooSmall { .. })) => {
                    self.grow_window()?;
                }
                other => return other,
            }
        }
    }

    /// One source move on the right frontier. Returns false when every source
    /// is injective over the support algebra.
    pub fn knit_step(&mut self) -> Result<bool, StripError> {
        let (moved_slot, new_slice) = {
            let res = self.with_growth(|s| {
                let flags =
                    injective_flags(&s.window, &s.frontier.slice, &s.quot, s.cfg.seed)?;
                let movable: Vec<usize> = s
                    .frontier
                    .slice
                    .sources()
                    .into_iter()
                    .filter(|&i| flags[i].is_none())
                    .collect();
                let Some(&idx) = movable.first() else {
                    return Ok(None);
                };
                let ns = move_source(&s.window, &s.frontier.slice, idx, &s.quot, s.cfg.seed)?;
                Ok(Some((idx, ns)))
            })?;
            match res {
                None => return Ok(false),
                Some(x) => x,
            }
        };
        let old_node = self.frontier.nodes[moved_slot];
        let new_node = self.push_node(new_slice.mods[moved_slot].clone(), false);
        // mesh: arrows N -> tau^{-1}M for every old slice arrow M -> N
        for &(s, t) in &self.frontier.slice.arrows.clone() {
            if s == moved_slot {
                self.arrows.push((self.frontier.nodes[t], new_node));
            }
        }
        self.tau_links.push((old_node, new_node));
        self.frontier.nodes[moved_slot] = new_node;
        self.frontier.slice = new_slice;
        Ok(true)
    }

    /// Knit the right frontier until every source is injective or the step
    /// budget is exhausted.
    pub fn knit_right(&mut self, steps: usize) -> Result<KnitStop, StripError> {
        for _ in 0..steps {
            if !self.knit_step()? {
                return Ok(KnitStop::AllSourcesInjective);
            }
        }
        if self.knit_step()? {
            Ok(KnitStop::StepCap)
        } else {
            Ok(KnitStop::AllSourcesInjective)
        }
    }

    /// Reflect the right frontier at the first admissible sink (equal
    /// completions are reflected once), inserting holes at the positions of
    /// the removed injectives.
    pub fn reflect_step(&mut self) -> Result<(), StripError> {
        let (comp, refl) = self.with_growth(|s| {
            let sinks = admissible_sinks(&s.window, &s.frontier.slice, &s.quot, s.cfg.seed)?;
            let Some((_, _, comp)) = sinks.into_iter().next() else {
                return Err(StripError::NoAdmissibleSink);
            };
            let refl =
                slices::reflect(&s.window, &s.frontier.slice, &s.quot, &comp, s.cfg.seed)?;
            Ok((comp, refl))
        })?;
        let old_nodes = self.frontier.nodes.clone();
        let old_arrows = self.frontier.slice.arrows.clone();
        let nmods = refl.slice.mods.len();
        let mut new_nodes = vec![usize::MAX; nmods];
        for &(o, nw) in &refl.kept {
            new_nodes[nw] = old_nodes[o];
        }
        // tau-moved nodes
        let mut tau_new_of_old = std::collections::HashMap::new();
        for &(o, nw) in &refl.tau_moved {
            let id = self.push_node(refl.slice.mods[nw].clone(), false);
            new_nodes[nw] = id;
            tau_new_of_old.insert(o, id);
            self.tau_links.push((old_nodes[o], id));
        }
        // replacement projectives + holes
        let mut pbar_of_old = std::collections::HashMap::new();
        let mut hole_of_old = std::collections::HashMap::new();
        for &(o, nw, wv, _next) in &refl.new_projectives {
            let id = self.push_node(refl.slice.mods[nw].clone(), true);
            new_nodes[nw] = id;
            pbar_of_old.insert(o, id);
            self.nodes[old_nodes[o]].injective = true;
            let (y, c) = self.window.vertex_info(wv);
            let hid = self.holes.len();
            self.holes.push(Hole {
                base_vertex: y,
                copy: c,
                inj_node: old_nodes[o],
                proj_node: id,
                in_nodes: Vec::new(),
                out_nodes: Vec::new(),
            });
            hole_of_old.insert(o, hid);
        }
        // strip arrows and hole incidences from the old slice quiver
        let in_g = {
            let mut v = vec![false; old_nodes.len()];
            for &i in &comp.members {
                v[i] = true;
            }
            v
        };
        let is_inj = |i: usize| hole_of_old.contains_key(&i);
        for &(s, t) in &old_arrows {
            match (in_g[s], in_g[t]) {
                (true, false) => {
                    // M in G (non-injective) -> kept N: mesh arrow N -> tau^{-1}M
                    self.arrows.push((old_nodes[t], tau_new_of_old[&s]));
                }
                (true, true) => match (is_inj(s), is_inj(t)) {
                    (false, false) => {
                        // M -> M': both translate: arrows tau^{-1}M -> tau^{-1}M'
                        // and the mesh arrow M' -> tau^{-1}M
                        self.arrows.push((tau_new_of_old[&s], tau_new_of_old[&t]));
                        self.arrows.push((old_nodes[t], tau_new_of_old[&s]));
                    }
                    (true, false) => {
                        // I_y -> M: tau^{-1}M -> P_y; hole edges
                        let hid = hole_of_old[&s];
                        self.arrows.push((tau_new_of_old[&t], pbar_of_old[&s]));
                        self.holes[hid].in_nodes.push(old_nodes[t]);
                        self.holes[hid].out_nodes.push(tau_new_of_old[&t]);
                    }
                    (true, true) => {
                        // I_w -> I_y: mirrored arrow among the projectives,
                        // hole-to-hole edge, and I_y is an in-neighbor of h_w
                        self.arrows.push((pbar_of_old[&s], pbar_of_old[&t]));
                        self.hole_edges.push((hole_of_old[&s], hole_of_old[&t]));
                        self.holes[hole_of_old[&s]].in_nodes.push(old_nodes[t]);
                        let hw = hole_of_old[&t];
                        self.holes[hw].out_nodes.push(pbar_of_old[&s]);
                    }
                    (false, true) => unreachable!("non-injective into an injective of G"),
                },
                (false, true) => unreachable!("G is predecessor-closed"),
                (false, false) => {}
            }
        }
        self.frontier = Frontier { nodes: new_nodes, slice: refl.slice };
        self.quot = support_algebra(&self.window, &self.frontier.slice)?;
        self.slice_log.push(self.frontier.nodes.clone());
        Ok(())
    }

    /// True when every module of the right frontier, shifted `k` copies down,
    /// is isomorphic to an already-built node.
    pub fn phi_repeated_by(&self, k: i64) -> bool {
        for m in &self.frontier.slice.mods {
            let Some(shifted) = self.window.shift(m, -k) else { return false };
            if self.find_node(&shifted).is_none() {
                return false;
            }
        }
        true
    }

    pub fn phi_repeated(&self) -> bool {
        self.phi_repeated_by(1)
    }

    /// The representation-finite driver: knit and reflect until every
    /// frontier module shifted down by `periods` copies has already been
    /// constructed — i.e. the strip covers that many full shift-periods.
    pub fn build_finite(&mut self) -> Result<(), StripError> {
        let p = self.cfg.periods.max(1) as i64;
        let mut reflections = 0usize;
        let mut total_moves = 0usize;
        loop {
            loop {
                if total_moves > self.cfg.knit_cap * (1 + self.cfg.periods) {
                    return Err(StripError::CapExceeded(total_moves));
                }
                if self.phi_repeated_by(p) {
                    self.repetitions = self.cfg.periods;
                    return Ok(());
                }
                if !self.knit_step()? {
                    break;
                }
                total_moves += 1;
            }
            if self.phi_repeated_by(p) {
                self.repetitions = self.cfg.periods;
                return Ok(());
            }
            if reflections >= self.cfg.reflect_cap * (1 + self.cfg.periods) {
                return Err(StripError::CapExceeded(reflections));
            }
            self.reflect_step()?;
            reflections += 1;
        }
    }

    /// The representation-infinite driver: knit right with the step cap,
    /// reflecting whenever the frontier saturates; then the mirrored left
    /// phase from the initial slice.
    pub fn build_infinite(&mut self) -> Result<(KnitStop, KnitStop), StripError> {
        let right_reason;
        let mut moves = 0usize;
        let mut reflections = 0usize;
        'right: loop {
            while moves < self.cfg.knit_cap {
                if !self.knit_step()? {
                    if reflections >= self.cfg.reflect_cap {
                        right_reason = KnitStop::AllSourcesInjective;
                        break 'right;
                    }
                    self.reflect_step()?;
                    reflections += 1;
                }
                moves += 1;
            }
            if moves >= self.cfg.knit_cap {
                right_reason = KnitStop::StepCap;
                break;
            }
        }
        let left_reason = self.left_phase()?;
        Ok((right_reason, left_reason))
    }

    /// Knit leftward from the current left frontier: run the right-phase
    /// machinery over the opposite window and transport the results back.
    /// Sinks are moved by the translation; coreflections fire when every
    /// sink is projective over the support.
    pub fn knit_left(&mut self, steps: usize) -> Result<KnitStop, StripError> {
        let op = opposite_window(&self.window)?;
        let s_op = op.transport_slice(&self.window, &self.left_frontier.slice);
        let mut opstrip = init_from_slice(op.window, s_op, self.cfg)?;
        let mut moves = 0usize;
        let mut reflections = 0usize;
        let reason;
        'outer: loop {
            while moves < steps {
                if !opstrip.knit_step()? {
                    if reflections >= self.cfg.reflect_cap {
                        reason = KnitStop::AllSinksProjective;
                        break 'outer;
                    }
                    opstrip.reflect_step()?;
                    reflections += 1;
                }
                moves += 1;
            }
            reason = KnitStop::StepCap;
            break;
        }
        self.merge_opposite(opstrip)?;
        Ok(reason)
    }

    fn left_phase(&mut self) -> Result<KnitStop, StripError> {
        self.knit_left(self.cfg.knit_cap)
    }

    /// Import the nodes of an opposite-window strip (its first slice being
    /// the mirror of our left frontier).
    fn merge_opposite(&mut self, opstrip: Strip) -> Result<(), StripError> {
        // Make sure our window covers the mirrored range.
        while self.window.lo > -opstrip.window.hi || self.window.hi < -opstrip.window.lo {
            self.grow_window()?;
        }
        let op = OppositeWindow {
            window: opstrip.window,
        };
        let seed_count = self.left_frontier.nodes.len();
        let mut map = vec![usize::MAX; opstrip.nodes.len()];
        for i in 0..seed_count {
            map[i] = self.left_frontier.nodes[i];
        }
        for (i, node) in opstrip.nodes.iter().enumerate().skip(seed_count) {
            let back = op.transport_back(&self.window, &node.module);
            let id = self.push_node(back, false);
            // an opposite projective is an injective on our side
            if node.projective {
                self.nodes[id].injective = true;
            }
            if node.injective {
                self.nodes[id].projective = true;
            }
            map[i] = id;
        }
        for &(s, t) in &opstrip.arrows {
            if s < seed_count && t < seed_count {
                continue; // seed slice arrows already present
            }
            self.arrows.push((map[t], map[s]));
        }
        for &(a, b) in &opstrip.tau_links {
            // op link (A, tau_op^{-1} A = B) mirrors to (B', A') here
            self.tau_links.push((map[b], map[a]));
        }
        let hole_base = self.holes.len();
        for h in &opstrip.holes {
            self.holes.push(Hole {
                base_vertex: h.base_vertex,
                copy: -h.copy,
                inj_node: map[h.proj_node],
                proj_node: map[h.inj_node],
                in_nodes: h.out_nodes.iter().map(|&n| map[n]).collect(),
                out_nodes: h.in_nodes.iter().map(|&n| map[n]).collect(),
            });
        }
        for &(a, b) in &opstrip.hole_edges {
            self.hole_edges.push((hole_base + b, hole_base + a));
        }
        // left frontier becomes the mirror of the op strip's right frontier
        let lf_nodes: Vec<usize> =
            opstrip.frontier.nodes.iter().map(|&n| map[n]).collect();
        let lf_slice = SliceModules {
            mods: opstrip
                .frontier
                .slice
                .mods
                .iter()
                .map(|m| op.transport_back(&self.window, m))
                .collect(),
            arrows: opstrip.frontier.slice.arrows.iter().map(|&(a, b)| (b, a)).collect(),
        };
        self.left_frontier = Frontier { nodes: lf_nodes, slice: lf_slice };
        Ok(())
    }

    /// LS1-LS3 checker against the strip; reports the first violated axiom.
    pub fn is_local_slice(&self, nodes: &[usize]) -> Result<(), String> {
        let set: std::collections::HashSet<usize> = nodes.iter().copied().collect();
        if set.len() != self.base_n() {
            return Err(format!("LS3: {} nodes, rank K0 = {}", set.len(), self.base_n()));
        }
        let tau_of: std::collections::HashMap<usize, usize> =
            self.tau_links.iter().map(|&(a, b)| (b, a)).collect();
        let tau_inv_of: std::collections::HashMap<usize, usize> =
            self.tau_links.iter().copied().collect();
        for &x in &set {
            for y in self.out_neighbors(x) {
                if !set.contains(&y) && tau_of.get(&y).map_or(true, |t| !set.contains(t)) {
                    return Err(format!("LS1(a) at arrow {} -> {}", x, y));
                }
            }
            for y in self.in_neighbors(x) {
                if !set.contains(&y) && tau_inv_of.get(&y).map_or(true, |t| !set.contains(t)) {
                    return Err(format!("LS1(b) at arrow {} -> {}", y, x));
                }
            }
        }
        // LS2: sectional paths between slice members stay inside.
        for &start in &set {
            // DFS over sectional paths
            let mut stack: Vec<(usize, Option<usize>, Vec<usize>)> =
                vec![(start, None, vec![start])];
            while let Some((at, prev, path)) = stack.pop() {
                for y in self.out_neighbors(at) {
                    if let Some(p) = prev {
                        // sectional: y != tau^{-1}(p)
                        if tau_inv_of.get(&p) == Some(&y) {
                            continue;
                        }
                    }
                    if path.contains(&y) {
                        continue;
                    }
                    if set.contains(&y) {
                        if path.iter().any(|n| !set.contains(n)) {
                            return Err(format!(
                                "LS2: sectional path {:?} -> {} leaves the slice",
                                path, y
                            ));
                        }
                    }
                    let mut np = path.clone();
                    np.push(y);
                    stack.push((y, Some(at), np));
                }
            }
        }
        Ok(())
    }

    /// Mesh additivity at every complete mesh (every translation link).
    pub fn check_mesh_additivity(&self) -> Result<(), String> {
        for &(a, b) in &self.tau_links {
            let middles = self.in_neighbors(b);
            let mut sum = vec![0usize; self.window.algebra.n];
            for m in &middles {
                for (i, d) in self.nodes[*m].module.dims.iter().enumerate() {
                    sum[i] += d;
                }
            }
            let lhs: Vec<usize> = self.nodes[a]
                .module
                .dims
                .iter()
                .zip(&self.nodes[b].module.dims)
                .map(|(x, y)| x + y)
                .collect();
            if lhs != sum {
                return Err(format!(
                    "mesh additivity fails at link {} -> {} ({} vs middles {:?})",
                    self.nodes[a].label,
                    self.nodes[b].label,
                    self.nodes[a].label,
                    middles.iter().map(|&m| self.nodes[m].label.clone()).collect::<Vec<_>>()
                ));
            }
        }
        Ok(())
    }

    /// Reachability from a set over the digraph with hole vertices included.
    fn reach_from(&self, starts: &[Vertex]) -> Vec<bool> {
        let nn = self.nodes.len();
        let total = nn + self.holes.len();
        let mut seen = vec![false; total];
        let mut stack: Vec<usize> = starts.iter().map(|v| v.flat(nn)).collect();
        for &s in &stack {
            // mark later during pop
            let _ = s;
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
        for &(s, t) in &self.arrows {
            adj[s].push(t);
        }
        for (hid, h) in self.holes.iter().enumerate() {
            for &i in &h.in_nodes {
                adj[i].push(nn + hid);
            }
            for &o in &h.out_nodes {
                adj[nn + hid].push(o);
            }
        }
        for &(a, b) in &self.hole_edges {
            adj[nn + a].push(nn + b);
        }
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            for &w in &adj[v] {
                if !seen[w] {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Count of holes strictly between two slices (node-id sets).
    pub fn holes_between(&self, s1: &[usize], s2: &[usize]) -> usize {
        let nn = self.nodes.len();
        let v1: Vec<Vertex> = s1.iter().map(|&n| Vertex::Node(n)).collect();
        let v2: Vec<Vertex> = s2.iter().map(|&n| Vertex::Node(n)).collect();
        let fwd1 = self.reach_from(&v1);
        let fwd2 = self.reach_from(&v2);
        let mut count = 0usize;
        for hid in 0..self.holes.len() {
            let h = Vertex::Hole(hid);
            let back = self.reach_from(&[h]);
            let s1_after_h = s1.iter().any(|&n| back[n]);
            let s2_after_h = s2.iter().any(|&n| back[n]);
            let h_after_s1 = fwd1[h.flat(nn)];
            let h_after_s2 = fwd2[h.flat(nn)];
            let s1_lt_h = h_after_s1 && !s1_after_h;
            let h_lt_s2 = s2_after_h && !h_after_s2;
            let s2_lt_h = h_after_s2 && !s2_after_h;
            let h_lt_s1 = s1_after_h && !h_after_s1;
            if (s1_lt_h && h_lt_s2) || (s2_lt_h && h_lt_s1) {
                count += 1;
            }
        }
        count
    }

    /// Locate the nodes carrying the given window modules; None if any is
    /// missing from the strip.
    pub fn locate(&self, mods: &[Representation]) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(mods.len());
        for m in mods {
            out.push(self.find_node(m)?);
        }
        Some(out)
    }

    /// Locate some shift of the given module list in the strip.
    pub fn locate_any_shift(&self, mods: &[Representation]) -> Option<(Vec<usize>, i64)> {
        let span = self.window.hi - self.window.lo;
        for k in 0..=span {
            for kk in [k, -k] {
                let shifted: Option<Vec<Representation>> =
                    mods.iter().map(|m| self.window.shift(m, kk)).collect();
                if let Some(shifted) = shifted {
                    if let Some(nodes) = self.locate(&shifted) {
                        return Some((nodes, kk));
                    }
                }
                if k == 0 {
                    break;
                }
            }
        }
        None
    }

    /// Minimal hole count over all relative shifts of two module lists that
    /// fit in the strip together.
    pub fn distance(&self, mods1: &[Representation], mods2: &[Representation]) -> Option<usize> {
        let span = self.window.hi - self.window.lo;
        let mut placements1: Vec<(i64, Vec<usize>)> = Vec::new();
        let mut placements2: Vec<(i64, Vec<usize>)> = Vec::new();
        for k in -span..=span {
            for (mods, placements) in
                [(mods1, &mut placements1), (mods2, &mut placements2)]
            {
                let shifted: Option<Vec<Representation>> =
                    mods.iter().map(|m| self.window.shift(m, k)).collect();
                if let Some(shifted) = shifted {
                    if let Some(nodes) = self.locate(&shifted) {
                        placements.push((k, nodes));
                    }
                }
            }
        }
        let mut best: Option<usize> = None;
        let mut seen_delta: std::collections::HashSet<i64> = std::collections::HashSet::new();
        for (k1, n1) in &placements1 {
            for (k2, n2) in &placements2 {
                if !seen_delta.insert(k2 - k1) {
                    continue;
                }
                let d = self.holes_between(n1, n2);
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best
    }

    /// Group nodes into shift-orbits via their collapsed modules: the
    /// quotient view of the strip.
    pub fn quotient_view(&self) -> QuotientView {
        let mut class_of = vec![usize::MAX; self.nodes.len()];
        let mut reps: Vec<(usize, Representation)> = Vec::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let pushed = self.window.pushdown(&node.module);
            let mut found = None;
            for (ci, (ri, rm)) in reps.iter().enumerate() {
                if self.nodes[*ri].label == node.label
                    && is_isomorphic(rm, &pushed, self.cfg.seed).unwrap_or(false)
                {
                    found = Some(ci);
                    break;
                }
            }
            match found {
                Some(ci) => {
                    class_of[i] = ci;
                    classes[ci].push(i);
                }
                None => {
                    class_of[i] = reps.len();
                    classes.push(vec![i]);
                    reps.push((i, pushed));
                }
            }
        }
        let mut arrows: Vec<(usize, usize)> = self
            .arrows
            .iter()
            .map(|&(s, t)| (class_of[s], class_of[t]))
            .collect();
        arrows.sort_unstable();
        arrows.dedup();
        let mut tau: Vec<(usize, usize)> = self
            .tau_links
            .iter()
            .map(|&(a, b)| (class_of[a], class_of[b]))
            .collect();
        tau.sort_unstable();
        tau.dedup();
        let mut hole_classes: Vec<usize> = self.holes.iter().map(|h| h.base_vertex).collect();
        hole_classes.sort_unstable();
        hole_classes.dedup();
        let labels = classes
            .iter()
            .map(|c| self.nodes[c[0]].label.clone())
            .collect();
        let projective = classes
            .iter()
            .map(|c| c.iter().any(|&i| self.nodes[i].projective))
            .collect();
        let injective = classes
            .iter()
            .map(|c| c.iter().any(|&i| self.nodes[i].injective))
            .collect();
        QuotientView { classes, class_of, labels, arrows, tau, hole_vertices: hole_classes, projective, injective }
    }
}

#[derive(Clone, Copy)]
enum Vertex {
    Node(usize),
    Hole(usize),
}

impl Vertex {
    fn flat(&self, nn: usize) -> usize {
        match self {
            Vertex::Node(n) => *n,
            Vertex::Hole(h) => nn + h,
        }
    }
}

pub struct QuotientView {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub labels: Vec<String>,
    pub arrows: Vec<(usize, usize)>,
    pub tau: Vec<(usize, usize)>,
    pub hole_vertices: Vec<usize>,
    pub projective: Vec<bool>,
    pub injective: Vec<bool>,
}

/// One enumerated fibre quotient: its presentation, a witness slice (over the
/// enumeration window) and the annihilator identity key.
pub struct FibreQuotient {
    pub quiver: BoundQuiver,
    pub witness: SliceModules,
    pub key: Vec<String>,
}

/// Breadth-first closure over reflections and coreflections, deduplicated by
/// the annihilator ideal of the pushed-down slice.
pub fn enumerate_fibre_quotients(
    ext: &ExtensionData,
    start: &SliceModules,
    window: Window,
    cfg: StripConfig,
) -> Result<(Vec<FibreQuotient>, Window), StripError> {
    let mut window = window;
    let mut queue: Vec<SliceModules> = vec![start.clone()];
    let mut found: Vec<FibreQuotient> = Vec::new();
    let mut seen: std::collections::HashSet<Vec<String>> = std::collections::HashSet::new();
    let mut expansions = 0usize;
    let _ = ext;
    while let Some(slice) = queue.pop() {
        let key = slices::annihilator_key(&window, &slice);
        if !seen.insert(key.clone()) {
            continue;
        }
        let alg = slices::algebra_of_slice(&window, &slice)?;
        found.push(FibreQuotient { quiver: alg.quiver, witness: slice.clone(), key });
        if expansions >= cfg.reflect_cap * 4 {
            return Err(StripError::CapExceeded(expansions));
        }
        expansions += 1;
        // Reflections from the rightmost representative.
        let mut attempts = 0;
        loop {
            attempts += 1;
            if attempts > 4 {
                return Err(StripError::Window(ExtensionError::CopyCapExceeded(cfg.copy_cap)));
            }
            let r: Result<(), SliceError> = (|| {
                let quot = support_algebra(&window, &slice)?;
                let rm = slices::rightmost_slice(&window, &slice, &quot, cfg.knit_cap, cfg.seed)?;
                let sinks = admissible_sinks(&window, &rm.slice, &quot, cfg.seed)?;
                let mut done: Vec<Vec<usize>> = Vec::new();
                for (_, _, comp) in &sinks {
                    if done.contains(&comp.members) {
                        continue;
                    }
                    done.push(comp.members.clone());
                    let refl = slices::reflect(&window, &rm.slice, &quot, comp, cfg.seed)?;
                    queue.insert(0, refl.slice);
                }
                // Coreflections from the leftmost representative.
                let lm = slices::leftmost_slice(&window, &slice, &quot, cfg.knit_cap, cfg.seed)?;
                let op = opposite_window(&window)?;
                let s_op = op.transport_slice(&window, &lm.slice);
                let quot_op = support_algebra(&op.window, &s_op)?;
                let sinks_op = admissible_sinks(&op.window, &s_op, &quot_op, cfg.seed)?;
                let mut done_op: Vec<Vec<usize>> = Vec::new();
                for (_, _, comp) in &sinks_op {
                    if done_op.contains(&comp.members) {
                        continue;
                    }
                    done_op.push(comp.members.clone());
                    let refl = slices::reflect(&op.window, &s_op, &quot_op, comp, cfg.seed)?;
                    queue.insert(0, op.transport_slice_back(&window, &refl.slice));
                }
                Ok(())
            })();
            match r {
                Err(SliceError::Window(ExtensionError::WindowTooSmall { .. })) => {
                    let new_lo = window.lo - 3;
                    let new_hi = window.hi + 3;
                    if new_hi - new_lo + 1 > 2 * cfg.copy_cap + 1 {
                        return Err(StripError::Window(ExtensionError::CopyCapExceeded(
                            cfg.copy_cap,
                        )));
                    }
                    let bigger = cluster_repetitive(&window.ext, new_lo, new_hi)?;
                    // transport queued and found slices
                    let tr = |s: &SliceModules, w: &Window, b: &Window| SliceModules {
                        mods: s.mods.iter().map(|m| w.transport(m, b).expect("transport")).collect(),
                        arrows: s.arrows.clone(),
                    };
                    queue = queue.iter().map(|s| tr(s, &window, &bigger)).collect();
                    for f in found.iter_mut() {
                        f.witness = tr(&f.witness, &window, &bigger);
                    }
                    window = bigger;
                }
                Err(e) => return Err(e.into()),
                Ok(()) => break,
            }
        }
    }
    // deterministic order: by canonical printed presentation
    found.sort_by(|a, b| a.quiver.print().cmp(&b.quiver.print()));
    Ok((found, window))
}

/// Convenience: build a strip from a base-algebra slice placed at copy 0.
pub fn strip_from_base_slice(
    ext: &ExtensionData,
    base_mods: Vec<Representation>,
    cfg: StripConfig,
) -> Result<Strip, StripError> {
    let span = 3i64;
    let window = cluster_repetitive(ext, -span, span)?;
    let lifted: Vec<Representation> = base_mods.iter().map(|m| window.lift(m, 0)).collect();
    let slice = slice_from_modules(lifted)?;
    init_from_slice(window, slice, cfg)
}
