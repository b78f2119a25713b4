//! Exact basis of a bound quiver algebra kQ/I, its multiplication table, and
//! two-sided ideal quotients re-presented as bound quivers.
//!
//! The construction enumerates paths length by length and row-reduces the
//! two-sided ideal spanned by u*r*v against them. Admissibility within the
//! length cap is certified before anything is truncated: the cap is an error
//! boundary, never a silent truncation.

use crate::matrix::RowSpace;
use crate::quiver::{label_cmp, Arrow, BoundQuiver, QuiverError, Relation};
use crate::scalar::{Field, K};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("ideal is not admissible within length cap {cap}: nonzero path classes persist")]
    NotAdmissible { cap: usize },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("relation system is not minimal: relation {index} lies in the span of the others modulo rad*I + I*rad")]
    MinimalSystemAmbiguous { index: usize },
}

#[derive(Clone, Debug)]
pub struct PathRec {
    pub src: usize,
    pub tgt: usize,
    pub arrows: Vec<u32>,
}

impl PathRec {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }
}

/// Sparse algebra element: (basis index, coefficient), sorted by index.
pub type Elem = Vec<(usize, K)>;

pub fn elem_add(a: &Elem, b: &Elem) -> Elem {
    let mut out: Elem = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push(b[j].clone());
            j += 1;
        } else {
            let c = a[i].1.clone() + b[j].1.clone();
            if !c.is_zero() {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn elem_scale(a: &Elem, f: &K) -> Elem {
    if f.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, c)| (*i, c.clone() * f.clone())).collect()
}

pub struct Algebra {
    pub quiver: BoundQuiver,
    pub n: usize,
    /// All paths enumerated up to `enum_len`, ordered by (length, discovery).
    pub paths: Vec<PathRec>,
    lookup: HashMap<(usize, Vec<u32>), usize>,
    /// Per (src,tgt): reduction data for path classes of length <= max_len.
    pair_paths: HashMap<(usize, usize), Vec<usize>>,
    pair_local: HashMap<usize, usize>,
    pair_reducer: HashMap<(usize, usize), RowSpace>,
    /// Path ids whose classes form the basis, ordered by (length, id).
    pub basis: Vec<usize>,
    basis_of_path: HashMap<usize, usize>,
    by_pair_basis: HashMap<(usize, usize), Vec<usize>>,
    pub dim: usize,
    pub max_len: usize,
    pub enum_len: usize,
    mult: HashMap<(usize, usize), Elem>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Algebra(dim={}, L={}, n={})", self.dim, self.max_len, self.n)
    }
}

pub fn default_length_cap(q: &BoundQuiver) -> usize {
    2 * q.arrows.len() + 2
}

struct Enumeration {
    paths: Vec<PathRec>,
    lookup: HashMap<(usize, Vec<u32>), usize>,
    by_len_start: Vec<usize>, // paths of length l occupy by_len_start[l]..by_len_start[l+1]
    ending_at: Vec<Vec<usize>>,
    starting_at: Vec<Vec<usize>>,
}

impl Enumeration {
    fn new(q: &BoundQuiver) -> Self {
        let n = q.vertices.len();
        let mut e = Enumeration {
            paths: Vec::new(),
            lookup: HashMap::new(),
            by_len_start: vec![0],
            ending_at: vec![Vec::new(); n],
            starting_at: vec![Vec::new(); n],
        };
        for v in 0..n {
            e.push(PathRec { src: v, tgt: v, arrows: Vec::new() });
        }
        e.by_len_start.push(e.paths.len());
        e
    }

    fn push(&mut self, p: PathRec) {
        let id = self.paths.len();
        self.lookup.insert((p.src, p.arrows.clone()), id);
        self.ending_at[p.tgt].push(id);
        self.starting_at[p.src].push(id);
        self.paths.push(p);
    }

    fn max_len(&self) -> usize {
        self.by_len_start.len() - 2
    }

    /// Extend enumeration to length `len`; returns false if no paths of that
    /// length exist (the quiver has run out of composable paths).
    fn extend_to(&mut self, q: &BoundQuiver, len: usize) -> bool {
        while self.max_len() < len {
            let l = self.max_len();
            let (lo, hi) = (self.by_len_start[l], self.by_len_start[l + 1]);
            let mut added = false;
            for pid in lo..hi {
                let tgt = self.paths[pid].tgt;
                for (ai, a) in q.arrows.iter().enumerate() {
                    if a.src == tgt {
                        let mut arrows = self.paths[pid].arrows.clone();
                        arrows.push(ai as u32);
                        self.push(PathRec { src: self.paths[pid].src, tgt: a.tgt, arrows });
                        added = true;
                    }
                }
            }
            self.by_len_start.push(self.paths.len());
            if !added {
                return false;
            }
        }
        true
    }

    fn ids_of_len(&self, l: usize) -> std::ops::Range<usize> {
        if l + 1 >= self.by_len_start.len() {
            return 0..0;
        }
        self.by_len_start[l]..self.by_len_start[l + 1]
    }
}

/// Expand u * r * v products into path-space vectors for one relation.
/// `max_total` bounds |u| + |term| + |v| for the terms kept (longer terms are
/// dropped when `truncate` is set, otherwise the whole product is skipped
/// unless every term fits).
fn ideal_products(
    enumr: &Enumeration,
    rel_terms: &[(K, Vec<usize>)],
    rel_src: usize,
    rel_tgt: usize,
    max_total: usize,
    truncate: bool,
    mut sink: impl FnMut(usize, usize, Vec<(usize, K)>),
) {
    let min_len = rel_terms.iter().map(|(_, p)| p.len()).min().unwrap_or(0);
    let max_len = rel_terms.iter().map(|(_, p)| p.len()).max().unwrap_or(0);
    let need = if truncate { min_len } else { max_len };
    for &u in &enumr.ending_at[rel_src] {
        let ulen = enumr.paths[u].len();
        if ulen + need > max_total {
            continue;
        }
        for &v in &enumr.starting_at[rel_tgt] {
            let vlen = enumr.paths[v].len();
            if ulen + need + vlen > max_total {
                continue;
            }
            let mut vec_terms: Vec<(usize, K)> = Vec::new();
            let mut ok = true;
            for (c, term) in rel_terms {
                let total = ulen + term.len() + vlen;
                if total > max_total {
                    if truncate {
                        continue;
                    } else {
                        ok = false;
                        break;
                    }
                }
                let mut arrows: Vec<u32> = enumr.paths[u].arrows.clone();
                arrows.extend(term.iter().map(|&a| a as u32));
                arrows.extend(enumr.paths[v].arrows.iter().copied());
                let key = (enumr.paths[u].src, arrows);
                let pid = *enumr.lookup.get(&key).expect("product path enumerated");
                vec_terms.push((pid, c.clone()));
            }
            if ok && !vec_terms.is_empty() {
                sink(enumr.paths[u].src, enumr.paths[v].tgt, vec_terms);
            }
        }
    }
}

pub fn path_algebra(q: &BoundQuiver, length_cap: usize) -> Result<Algebra, AlgebraError> {
    q.validate()?;
    let n = q.vertices.len();
    let mut enumr = Enumeration::new(q);

    let rel_data: Vec<(Vec<(K, Vec<usize>)>, usize, usize)> = q
        .relations
        .iter()
        .map(|r| {
            let (s, t) = q.path_endpoints(&r.terms[0].1).expect("validated relation");
            (r.terms.clone(), s, t)
        })
        .collect();

    let start = rel_data
        .iter()
        .flat_map(|(terms, _, _)| terms.iter().map(|(_, p)| p.len()))
        .max()
        .unwrap_or(0)
        .max(1);

    // Certification loop: find the first length l0 at which every path class
    // provably vanishes, using only un-truncated (complete) ideal elements.
    let mut m = start;
    let l0;
    loop {
        let exhausted = !enumr.extend_to(q, m + 1);
        let top = enumr.max_len();
        // Complete ideal elements, reduced per (src,tgt) pair.
        let mut reducers: HashMap<(usize, usize), RowSpace> = HashMap::new();
        let mut pair_paths: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut local: HashMap<usize, usize> = HashMap::new();
        for (pid, p) in enumr.paths.iter().enumerate() {
            let e = pair_paths.entry((p.src, p.tgt)).or_default();
            local.insert(pid, e.len());
            e.push(pid);
        }
        for (pair, list) in &pair_paths {
            reducers.insert(*pair, RowSpace::new(list.len()));
        }
        for (terms, s, t) in &rel_data {
            ideal_products(&enumr, terms, *s, *t, top, false, |ps, pt, sparse| {
                let red = reducers.get_mut(&(ps, pt)).unwrap();
                let mut dense = vec![K::zero(); red.dim];
                for (pid, c) in sparse {
                    dense[local[&pid]] += c;
                }
                red.insert(&dense);
            });
        }
        let mut found = None;
        'lens: for l in 0..=top {
            let range = enumr.ids_of_len(l);
            if range.is_empty() {
                // No paths of this length at all: vacuously all classes vanish.
                found = Some(l);
                break;
            }
            for pid in range {
                let p = &enumr.paths[pid];
                let red = &reducers[&(p.src, p.tgt)];
                let mut dense = vec![K::zero(); red.dim];
                dense[local[&pid]] = K::one();
                if !red.contains(&dense) {
                    continue 'lens;
                }
            }
            found = Some(l);
            break;
        }
        if let Some(l) = found {
            l0 = l;
            break;
        }
        if exhausted {
            // All paths enumerated and no vanishing length: impossible for a
            // finite acyclic quiver (top+1 has no paths), so unreachable.
            unreachable!("path enumeration exhausted without a vanishing length");
        }
        m += 1;
        if m > length_cap {
            return Err(AlgebraError::NotAdmissible { cap: length_cap });
        }
    }

    let max_len = l0.saturating_sub(1);
    enumr.extend_to(q, max_len + 1);

    // Final reduction over paths of length <= max_len, now with truncation
    // (legitimate: R^{l0} is certified inside the ideal).
    let mut pair_paths: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut pair_local: HashMap<usize, usize> = HashMap::new();
    for (pid, p) in enumr.paths.iter().enumerate() {
        if p.len() > max_len {
            continue;
        }
        let e = pair_paths.entry((p.src, p.tgt)).or_default();
        pair_local.insert(pid, e.len());
        e.push(pid);
    }
    let mut pair_reducer: HashMap<(usize, usize), RowSpace> = HashMap::new();
    for (pair, list) in &pair_paths {
        pair_reducer.insert(*pair, RowSpace::new(list.len()));
    }
    for (terms, s, t) in &rel_data {
        ideal_products(&enumr, terms, *s, *t, max_len, true, |ps, pt, sparse| {
            let red = pair_reducer.get_mut(&(ps, pt)).unwrap();
            let mut dense = vec![K::zero(); red.dim];
            for (pid, c) in sparse {
                dense[pair_local[&pid]] += c;
            }
            red.insert(&dense);
        });
    }

    // Basis = non-pivot paths, in global (length, id) order.
    let mut basis = Vec::new();
    let mut basis_of_path = HashMap::new();
    for (pid, p) in enumr.paths.iter().enumerate() {
        if p.len() > max_len {
            continue;
        }
        let red = &pair_reducer[&(p.src, p.tgt)];
        if !red.pivots().contains(&pair_local[&pid]) {
            basis_of_path.insert(pid, basis.len());
            basis.push(pid);
        }
    }
    let dim = basis.len();
    let true_max = basis.iter().map(|&p| enumr.paths[p].len()).max().unwrap_or(0);
    let mut by_pair_basis: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (bi, &pid) in basis.iter().enumerate() {
        let p = &enumr.paths[pid];
        by_pair_basis.entry((p.src, p.tgt)).or_default().push(bi);
    }

    let mut alg = Algebra {
        quiver: q.clone(),
        n,
        paths: enumr.paths,
        lookup: enumr.lookup,
        pair_paths,
        pair_local,
        pair_reducer,
        basis,
        basis_of_path,
        by_pair_basis,
        dim,
        max_len: true_max,
        enum_len: max_len + 1,
        mult: HashMap::new(),
    };

    // Multiplication table over composable basis pairs.
    let mut mult = HashMap::new();
    for i in 0..dim {
        for j in 0..dim {
            let (pi, pj) = (alg.basis[i], alg.basis[j]);
            if alg.paths[pi].tgt != alg.paths[pj].src {
                continue;
            }
            let mut arrows = alg.paths[pi].arrows.clone();
            arrows.extend(alg.paths[pj].arrows.iter().copied());
            let prod = alg.reduce_path_arrows(alg.paths[pi].src, &arrows);
            mult.insert((i, j), prod);
        }
    }
    alg.mult = mult;
    Ok(alg)
}

impl Algebra {
    /// Class of the path given by an arrow sequence, as a basis combination.
    pub fn reduce_path_arrows(&self, src: usize, arrows: &[u32]) -> Elem {
        if arrows.len() > self.max_len {
            return Vec::new();
        }
        let pid = *self
            .lookup
            .get(&(src, arrows.to_vec()))
            .expect("path within enumerated range");
        self.class_of_path(pid)
    }

    pub fn class_of_path(&self, pid: usize) -> Elem {
        let p = &self.paths[pid];
        if p.len() > self.max_len {
            return Vec::new();
        }
        if let Some(&b) = self.basis_of_path.get(&pid) {
            return vec![(b, K::one())];
        }
        let red = &self.pair_reducer[&(p.src, p.tgt)];
        let mut dense = vec![K::zero(); red.dim];
        dense[self.pair_local[&pid]] = K::one();
        let rem = red.reduce(&dense);
        let list = &self.pair_paths[&(p.src, p.tgt)];
        let mut out: Elem = Vec::new();
        for (li, c) in rem.iter().enumerate() {
            if !c.is_zero() {
                let qid = list[li];
                out.push((self.basis_of_path[&qid], c.clone()));
            }
        }
        out.sort_by_key(|(b, _)| *b);
        out
    }

    pub fn basis_path(&self, b: usize) -> &PathRec {
        &self.paths[self.basis[b]]
    }

    pub fn basis_len(&self, b: usize) -> usize {
        self.basis_path(b).len()
    }

    pub fn basis_src(&self, b: usize) -> usize {
        self.basis_path(b).src
    }

    pub fn basis_tgt(&self, b: usize) -> usize {
        self.basis_path(b).tgt
    }

    pub fn basis_name(&self, b: usize) -> String {
        let p = self.basis_path(b);
        if p.arrows.is_empty() {
            format!("e_{}", self.quiver.vertices[p.src])
        } else {
            p.arrows
                .iter()
                .map(|&a| self.quiver.arrows[a as usize].name.clone())
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    pub fn unit(&self, v: usize) -> Elem {
        let pid = self.lookup[&(v, Vec::new())];
        vec![(self.basis_of_path[&pid], K::one())]
    }

    pub fn arrow_class(&self, ai: usize) -> Elem {
        let a = &self.quiver.arrows[ai];
        let pid = self.lookup[&(a.src, vec![ai as u32])];
        // Arrows are never killed by an admissible ideal.
        vec![(self.basis_of_path[&pid], K::one())]
    }

    pub fn mult_basis(&self, i: usize, j: usize) -> Elem {
        self.mult.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn elem_mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut acc: Elem = Vec::new();
        for (i, ci) in a {
            for (j, cj) in b {
                if let Some(prod) = self.mult.get(&(*i, *j)) {
                    let f = ci.clone() * cj.clone();
                    acc = elem_add(&acc, &elem_scale(prod, &f));
                }
            }
        }
        acc
    }

    pub fn basis_indices_at(&self, src: usize, tgt: usize) -> Vec<usize> {
        self.by_pair_basis.get(&(src, tgt)).cloned().unwrap_or_default()
    }

    /// The vertex pairs carrying at least one basis element, sorted.
    pub fn nonempty_pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self.by_pair_basis.keys().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn pair_dim(&self, src: usize, tgt: usize) -> usize {
        self.basis_indices_at(src, tgt).len()
    }

    /// Evaluate a relation of the underlying quiver to a basis combination.
    pub fn relation_class(&self, r: &Relation) -> Elem {
        let mut acc: Elem = Vec::new();
        for (c, p) in &r.terms {
            let (src, _) = self.quiver.path_endpoints(p).expect("relation path");
            let arrows: Vec<u32> = p.iter().map(|&a| a as u32).collect();
            if arrows.len() > self.max_len {
                continue;
            }
            if let Some(&pid) = self.lookup.get(&(src, arrows)) {
                acc = elem_add(&acc, &elem_scale(&self.class_of_path(pid), c));
            }
        }
        acc
    }

    pub fn elem_to_dense(&self, e: &Elem) -> Vec<K> {
        let mut v = vec![K::zero(); self.dim];
        for (i, c) in e {
            v[*i] = c.clone();
        }
        v
    }

    pub fn dense_to_elem(&self, v: &[K]) -> Elem {
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect()
    }
}

/// A two-sided ideal, stored per (src, tgt) block: the ideal of a bound
/// quiver algebra generated by homogeneous components is itself a direct sum
/// of blocks.
pub struct BlockIdeal {
    pub blocks: HashMap<(usize, usize), BlockSpace>,
    pub rank: usize,
}

pub struct BlockSpace {
    pub basis_ids: Vec<usize>,
    local_of: HashMap<usize, usize>,
    pub space: RowSpace,
}

impl BlockIdeal {
    fn block_for(&mut self, alg: &Algebra, pair: (usize, usize)) -> &mut BlockSpace {
        self.blocks.entry(pair).or_insert_with(|| {
            let ids = alg.basis_indices_at(pair.0, pair.1);
            let local_of = ids.iter().enumerate().map(|(l, &b)| (b, l)).collect();
            BlockSpace { space: RowSpace::new(ids.len()), basis_ids: ids, local_of }
        })
    }

    /// Insert a homogeneous element; true if the rank grew.
    fn insert_homogeneous(&mut self, alg: &Algebra, pair: (usize, usize), e: &Elem) -> bool {
        let blk = self.block_for(alg, pair);
        let mut dense = vec![K::zero(); blk.basis_ids.len()];
        for (b, c) in e {
            dense[blk.local_of[b]] = c.clone();
        }
        if blk.space.insert(&dense) {
            self.rank += 1;
            true
        } else {
            false
        }
    }

    /// Remainder of an arbitrary element after reduction by the ideal.
    pub fn reduce_elem(&self, alg: &Algebra, e: &Elem) -> Elem {
        let mut out: Elem = Vec::new();
        let mut by_pair: HashMap<(usize, usize), Elem> = HashMap::new();
        for (b, c) in e {
            by_pair
                .entry((alg.basis_src(*b), alg.basis_tgt(*b)))
                .or_default()
                .push((*b, c.clone()));
        }
        for (pair, part) in by_pair {
            match self.blocks.get(&pair) {
                None => out.extend(part),
                Some(blk) => {
                    let mut dense = vec![K::zero(); blk.basis_ids.len()];
                    for (b, c) in &part {
                        dense[blk.local_of[b]] = c.clone();
                    }
                    let rem = blk.space.reduce(&dense);
                    for (l, c) in rem.into_iter().enumerate() {
                        if !c.is_zero() {
                            out.push((blk.basis_ids[l], c));
                        }
                    }
                }
            }
        }
        out.sort_by_key(|(b, _)| *b);
        out
    }

    pub fn contains_elem(&self, alg: &Algebra, e: &Elem) -> bool {
        self.reduce_elem(alg, e).is_empty()
    }

    /// All reduced rows of the ideal, as algebra elements.
    pub fn elements(&self) -> Vec<Elem> {
        let mut pairs: Vec<&(usize, usize)> = self.blocks.keys().collect();
        pairs.sort();
        let mut out = Vec::new();
        for pair in pairs {
            let blk = &self.blocks[pair];
            for row in blk.space.rows() {
                let e: Elem = row
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(l, c)| (blk.basis_ids[l], c.clone()))
                    .collect();
                out.push(e);
            }
        }
        out
    }
}

fn homogeneous_components(alg: &Algebra, e: &Elem) -> Vec<((usize, usize), Elem)> {
    let mut by_pair: HashMap<(usize, usize), Elem> = HashMap::new();
    for (b, c) in e {
        by_pair
            .entry((alg.basis_src(*b), alg.basis_tgt(*b)))
            .or_default()
            .push((*b, c.clone()));
    }
    by_pair.into_iter().collect()
}

/// Two-sided ideal closure of a set of algebra elements, kept blockwise.
pub fn ideal_closure(alg: &Algebra, gens: &[Elem]) -> BlockIdeal {
    let mut ideal = BlockIdeal { blocks: HashMap::new(), rank: 0 };
    let mut queue: Vec<((usize, usize), Elem)> = Vec::new();
    for g in gens {
        queue.extend(homogeneous_components(alg, g));
    }
    while let Some((pair, e)) = queue.pop() {
        if !ideal.insert_homogeneous(alg, pair, &e) {
            continue;
        }
        for (ai, arr) in alg.quiver.arrows.iter().enumerate() {
            if arr.tgt == pair.0 {
                let left = alg.elem_mul(&alg.arrow_class(ai), &e);
                if !left.is_empty() {
                    queue.push(((arr.src, pair.1), left));
                }
            }
            if arr.src == pair.1 {
                let right = alg.elem_mul(&e, &alg.arrow_class(ai));
                if !right.is_empty() {
                    queue.push(((pair.0, arr.tgt), right));
                }
            }
        }
    }
    ideal
}

/// The result of quotienting an algebra by a two-sided ideal: a fresh bound
/// quiver presentation plus the data to move representations across.
pub struct Quotient {
    pub source_dim: usize,
    pub ideal: BlockIdeal,
    pub quiver: BoundQuiver,
    pub algebra: Arc<Algebra>,
    /// old vertex index -> new vertex index (None when the vertex died)
    pub vertex_to_new: Vec<Option<usize>>,
    pub vertex_from_new: Vec<usize>,
    /// new arrow -> representing element of the source algebra
    pub arrow_lift: Vec<Elem>,
    /// quotient coordinates: classes are expressed over the complement
    /// transversal (the non-pivot source basis elements, in order)
    pub transversal: Vec<usize>,
    /// B-basis index -> quotient coordinates (rows of the change matrix)
    pub b_to_quot: crate::matrix::Mat,
    pub quot_to_b: crate::matrix::Mat,
}

impl Quotient {
    /// Quotient coordinates of a source-algebra element.
    pub fn class_coords(&self, alg: &Algebra, e: &Elem) -> Vec<K> {
        let rem = self.ideal.reduce_elem(alg, e);
        let mut out = vec![K::zero(); self.transversal.len()];
        let mut it = rem.into_iter().peekable();
        for (k, &b) in self.transversal.iter().enumerate() {
            while let Some(&(rb, _)) = it.peek() {
                if rb < b {
                    it.next();
                } else {
                    break;
                }
            }
            if let Some(&(rb, _)) = it.peek() {
                if rb == b {
                    out[k] = it.next().unwrap().1;
                }
            }
        }
        out
    }
}

pub fn quotient_by_ideal(alg: &Arc<Algebra>, gens: &[Elem]) -> Result<Quotient, AlgebraError> {
    let ideal = ideal_closure(alg, gens);
    // Transversal: basis elements that are not pivots inside their block.
    let mut dead: std::collections::HashSet<usize> = std::collections::HashSet::new();
    for (pair, blk) in &ideal.blocks {
        let _ = pair;
        for &p in blk.space.pivots() {
            dead.insert(blk.basis_ids[p]);
        }
    }
    let transversal: Vec<usize> = (0..alg.dim).filter(|i| !dead.contains(i)).collect();
    let qdim = transversal.len();

    let tv_pos: HashMap<usize, usize> =
        transversal.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let class_coords = |e: &Elem| -> Vec<K> {
        let rem = ideal.reduce_elem(alg, e);
        let mut out = vec![K::zero(); qdim];
        for (b, c) in rem {
            out[tv_pos[&b]] = c;
        }
        out
    };

    // Surviving vertices.
    let mut vertex_to_new = vec![None; alg.n];
    let mut vertex_from_new = Vec::new();
    let mut new_vertices = Vec::new();
    for v in 0..alg.n {
        let coords = class_coords(&alg.unit(v));
        if coords.iter().any(|c| !c.is_zero()) {
            vertex_to_new[v] = Some(vertex_from_new.len());
            vertex_from_new.push(v);
            new_vertices.push(alg.quiver.vertices[v].clone());
        }
    }

    // A spanning independent set for the image of the radical: products of
    // classes are classes of products, so powers of the radical can be
    // computed from these representatives alone.
    let rad_elems: Vec<usize> = (0..alg.dim).filter(|&b| alg.basis_len(b) >= 1).collect();
    let mut rad_span = RowSpace::new(qdim);
    let mut rad_reps: Vec<Elem> = Vec::new();
    for &b in &rad_elems {
        let e = vec![(b, K::one())];
        if rad_span.insert(&class_coords(&e)) {
            rad_reps.push(e);
        }
    }
    // Radical square of the quotient, in quotient coordinates.
    let mut rad2 = RowSpace::new(qdim);
    for i in &rad_reps {
        for j in &rad_reps {
            let prod = alg.elem_mul(i, j);
            if !prod.is_empty() {
                rad2.insert(&class_coords(&prod));
            }
        }
    }

    // Arrows: a basis of rad/rad^2 per vertex pair, preferring the classes of
    // original arrows (keeping their names) and synthesizing names otherwise.
    let mut arrows = Vec::new();
    let mut arrow_lift = Vec::new();
    let mut used_names: std::collections::HashSet<String> =
        new_vertices.iter().cloned().collect();
    let mut fresh = 0usize;
    for (nx, &ox) in vertex_from_new.iter().enumerate() {
        for (ny, &oy) in vertex_from_new.iter().enumerate() {
            let mut span = rad2.clone();
            let mut candidates: Vec<(Option<String>, Elem)> = Vec::new();
            for (ai, a) in alg.quiver.arrows.iter().enumerate() {
                if a.src == ox && a.tgt == oy {
                    candidates.push((Some(a.name.clone()), alg.arrow_class(ai)));
                }
            }
            for b in alg.basis_indices_at(ox, oy) {
                if alg.basis_len(b) >= 1 {
                    candidates.push((None, vec![(b, K::one())]));
                }
            }
            for (name, e) in candidates {
                let coords = class_coords(&e);
                if span.insert(&coords) {
                    let name = match name {
                        Some(n) if !used_names.contains(&n) => n,
                        _ => loop {
                            let n = format!("w{}", fresh);
                            fresh += 1;
                            if !used_names.contains(&n) {
                                break n;
                            }
                        },
                    };
                    used_names.insert(name.clone());
                    arrows.push(Arrow { name, src: nx, tgt: ny });
                    arrow_lift.push(e);
                }
            }
        }
    }

    // Nilpotency length of the quotient: iterate radical powers, pruning each
    // power to an independent spanning set before multiplying on.
    let mut lq = 0usize;
    {
        let mut current: Vec<Elem> = rad_reps.clone();
        let mut power = 1usize;
        loop {
            let mut space = RowSpace::new(qdim);
            let mut pruned = Vec::new();
            for e in &current {
                if space.insert(&class_coords(e)) {
                    pruned.push(e.clone());
                }
            }
            if pruned.is_empty() {
                break;
            }
            lq = power;
            let mut next = Vec::new();
            for e in &pruned {
                for b in &rad_reps {
                    let prod = alg.elem_mul(e, b);
                    if !prod.is_empty() {
                        next.push(prod);
                    }
                }
            }
            current = next;
            power += 1;
            if power > alg.max_len + 1 {
                break;
            }
        }
    }

    // Relations: kernel of the evaluation of new-quiver paths, minimized.
    let proto = BoundQuiver { vertices: new_vertices, arrows, relations: Vec::new() };
    let mut relations = Vec::new();
    {
        // Enumerate new-quiver paths up to lq + 1.
        let mut penum = Enumeration::new(&proto);
        penum.extend_to(&proto, lq + 1);
        // Evaluate each path.
        let mut evals: Vec<Vec<K>> = Vec::with_capacity(penum.paths.len());
        for p in &penum.paths {
            let mut e: Elem = alg.unit(vertex_from_new[p.src]);
            for &a in &p.arrows {
                e = alg.elem_mul(&e, &arrow_lift[a as usize]);
            }
            evals.push(class_coords(&e));
        }
        // Per (src,tgt) block: kernel among paths of length in 2..=lq+1.
        let mut block_paths: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (pid, p) in penum.paths.iter().enumerate() {
            if p.len() >= 2 {
                block_paths.entry((p.src, p.tgt)).or_default().push(pid);
            }
        }
        let mut blocks: Vec<(&(usize, usize), &Vec<usize>)> = block_paths.iter().collect();
        blocks.sort_by_key(|(k, _)| **k);
        let mut kernel_vectors: Vec<(Vec<usize>, Vec<Vec<K>>)> = Vec::new();
        for (_, pids) in blocks {
            let mat = crate::matrix::Mat::from_rows(pids.iter().map(|&p| evals[p].clone()).collect());
            let ker = mat.left_kernel();
            let mut vecs = Vec::new();
            for r in 0..ker.rows {
                vecs.push(ker.row(r));
            }
            if !vecs.is_empty() {
                kernel_vectors.push((pids.clone(), vecs));
            }
        }
        // Minimal generators: quotient the kernel by arrow*ker + ker*arrow.
        // Work in the full path space indexed by penum path ids.
        let pdim = penum.paths.len();
        let mut all_kernel: Vec<Vec<K>> = Vec::new();
        for (pids, vecs) in &kernel_vectors {
            for v in vecs {
                let mut dense = vec![K::zero(); pdim];
                for (k, &pid) in pids.iter().enumerate() {
                    dense[pid] = v[k].clone();
                }
                all_kernel.push(dense);
            }
        }
        let shift = |dense: &Vec<K>, a: usize, left: bool| -> Option<Vec<K>> {
            let mut out = vec![K::zero(); pdim];
            let mut any = false;
            for (pid, c) in dense.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let p = &penum.paths[pid];
                let arr = &proto.arrows[a];
                let (src, arrows) = if left {
                    if arr.tgt != p.src {
                        continue;
                    }
                    let mut ar = vec![a as u32];
                    ar.extend(p.arrows.iter().copied());
                    (arr.src, ar)
                } else {
                    if p.tgt != arr.src {
                        continue;
                    }
                    let mut ar = p.arrows.clone();
                    ar.push(a as u32);
                    (p.src, ar)
                };
                if arrows.len() > lq + 1 {
                    // truncation: dropped tails are themselves kernel elements
                    continue;
                }
                if let Some(&qid) = penum.lookup.get(&(src, arrows)) {
                    out[qid] += c.clone();
                    any = true;
                }
            }
            if any {
                Some(out)
            } else {
                None
            }
        };
        let mut degenerate = RowSpace::new(pdim);
        for dense in &all_kernel {
            for a in 0..proto.arrows.len() {
                if let Some(v) = shift(dense, a, true) {
                    degenerate.insert(&v);
                }
                if let Some(v) = shift(dense, a, false) {
                    degenerate.insert(&v);
                }
            }
        }
        for dense in &all_kernel {
            if degenerate.insert(dense) {
                let mut terms = Vec::new();
                for (pid, c) in dense.iter().enumerate() {
                    if !c.is_zero() {
                        let arrows: Vec<usize> =
                            penum.paths[pid].arrows.iter().map(|&a| a as usize).collect();
                        terms.push((c.clone(), arrows));
                    }
                }
                relations.push(Relation { terms });
            }
        }
    }

    let quiver = BoundQuiver { relations, ..proto };
    let algebra = Arc::new(path_algebra(&quiver, default_length_cap(&quiver).max(lq + 2))?);
    debug_assert_eq!(algebra.dim, qdim, "quotient presentation has wrong dimension");

    // Change of basis between the new path algebra and quotient coordinates.
    let mut rows = Vec::with_capacity(algebra.dim);
    for b in 0..algebra.dim {
        let p = algebra.basis_path(b);
        let mut e: Elem = alg.unit(vertex_from_new[p.src]);
        for &a in &p.arrows {
            e = alg.elem_mul(&e, &arrow_lift[a as usize]);
        }
        rows.push(class_coords(&e));
    }
    let b_to_quot = crate::matrix::Mat::from_rows(rows);
    let quot_to_b = b_to_quot
        .inverse()
        .expect("quotient presentation basis must be invertible over the transversal");

    let _ = tv_pos;
    Ok(Quotient {
        source_dim: alg.dim,
        ideal,
        quiver,
        algebra,
        vertex_to_new,
        vertex_from_new,
        arrow_lift,
        transversal,
        b_to_quot,
        quot_to_b,
    })
}

/// Check that the given relations are linearly independent modulo
/// I*rad + rad*I (a minimal system); errors with the first dependent index.
pub fn check_minimal_system(alg: &Algebra, q: &BoundQuiver) -> Result<(), AlgebraError> {
    // Work in the enumerated path space, deep enough that no bare relation
    // term is truncated.
    let maxrel = q
        .relations
        .iter()
        .flat_map(|r| r.terms.iter().map(|(_, p)| p.len()))
        .max()
        .unwrap_or(0);
    let mut enumr = Enumeration::new(q);
    enumr.extend_to(q, alg.enum_len.max(maxrel));
    let top = enumr.max_len();
    let mut reducers: HashMap<(usize, usize), (Vec<usize>, HashMap<usize, usize>, RowSpace)> =
        HashMap::new();
    for (pid, p) in enumr.paths.iter().enumerate() {
        let e = reducers
            .entry((p.src, p.tgt))
            .or_insert_with(|| (Vec::new(), HashMap::new(), RowSpace::new(0)));
        e.1.insert(pid, e.0.len());
        e.0.push(pid);
    }
    for (_, entry) in reducers.iter_mut() {
        entry.2 = RowSpace::new(entry.0.len());
    }
    for r in &q.relations {
        let (s, t) = q.path_endpoints(&r.terms[0].1).unwrap();
        ideal_products(&enumr, &r.terms, s, t, top, true, |ps, pt, sparse| {
            let entry = reducers.get_mut(&(ps, pt)).unwrap();
            // Only u*r*v with |u|+|v| >= 1: skip the bare relation itself.
            // ideal_products cannot tell, so detect: the sparse vector equals
            // the relation vector exactly when u and v are trivial; we filter
            // by path length sum.
            let min_term = sparse
                .iter()
                .map(|(pid, _)| enumr.paths[*pid].len())
                .min()
                .unwrap_or(0);
            let rel_min = r.terms.iter().map(|(_, p)| p.len()).min().unwrap();
            if min_term == rel_min {
                // could be the bare relation; check exact match of supports
                let bare: Vec<usize> = r
                    .terms
                    .iter()
                    .map(|(_, p)| {
                        let arrows: Vec<u32> = p.iter().map(|&a| a as u32).collect();
                        enumr.lookup[&(q.path_endpoints(p).unwrap().0, arrows)]
                    })
                    .collect();
                let sup: Vec<usize> = sparse.iter().map(|(pid, _)| *pid).collect();
                if bare.iter().all(|b| sup.contains(b)) && sup.len() == bare.len() {
                    return;
                }
            }
            let mut dense = vec![K::zero(); entry.2.dim];
            for (pid, c) in sparse {
                dense[entry.1[&pid]] += c;
            }
            entry.2.insert(&dense);
        });
    }
    for (idx, r) in q.relations.iter().enumerate() {
        let (s, t) = q.path_endpoints(&r.terms[0].1).unwrap();
        let entry = reducers.get_mut(&(s, t)).unwrap();
        let mut dense = vec![K::zero(); entry.2.dim];
        for (c, p) in &r.terms {
            let arrows: Vec<u32> = p.iter().map(|&a| a as u32).collect();
            if let Some(&pid) = enumr.lookup.get(&(s, arrows)) {
                dense[entry.1[&pid]] += c.clone();
            }
        }
        let _ = t;
        if !entry.2.insert(&dense) {
            return Err(AlgebraError::MinimalSystemAmbiguous { index: idx });
        }
    }
    Ok(())
}

/// Canonical sort key for vertex labels (used by printers downstream).
pub fn sorted_vertex_order(q: &BoundQuiver) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..q.vertices.len()).collect();
    idx.sort_by(|&a, &b| label_cmp(&q.vertices[a], &q.vertices[b]));
    idx
}
