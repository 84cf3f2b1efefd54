//! Rooted maps as rotation systems.
//!
//! A map with `n` edges has darts `0..2n`; darts `2i` and `2i + 1` are the two
//! ends of edge `i`, so the edge involution is `d ^ 1`. `sigma[d]` is the next
//! dart counterclockwise around the vertex of `d`, and faces are the orbits of
//! `sigma ∘ alpha`. The root is a dart, which stands for the corner just before
//! it; the single map without edges has no root dart.
//!
//! Every map with `n >= 1` edges is obtained in exactly one way from smaller
//! maps by one of two steps:
//!
//! * **isthmus**: join the roots of a top map and a bottom map by a new edge;
//!   the new root is the new edge's dart at the top map's root vertex.
//! * **insert**: add a new edge from the root corner of a map with `n - 1`
//!   edges to any of its `2n - 2` corners, or to the root corner itself on
//!   the other side of the new root dart, for `2n - 1` choices in all.
//!
//! The isthmus edge is always a bridge and the inserted edge never is, which
//! makes [`decompose`] well defined. Enumeration, ranking and sampling all
//! follow `m_n = Σ m_k m_{n-1-k} + (2n - 1) m_{n-1}`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::gfengine::{MapCounts, Statistic};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("sigma is not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("odd number of darts")]
    OddDarts,
    #[error("map is not connected")]
    Disconnected,
    #[error("root dart {0} out of range")]
    BadRoot(u32),
    #[error("a map with edges needs a root dart")]
    MissingRoot,
    #[error("insert position {position} out of range 0..={max}")]
    PositionOutOfRange { position: usize, max: usize },
    #[error("the empty map has no construction step")]
    Empty,
    #[error("rank out of range")]
    RankOutOfRange,
}

/// A connected rooted map; see the module docs for the conventions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedMap {
    sigma: Vec<u32>,
    root: Option<u32>,
}

impl RootedMap {
    /// The map with one vertex and no edges.
    pub fn empty() -> Self {
        RootedMap {
            sigma: Vec::new(),
            root: None,
        }
    }

    /// Validating constructor.
    pub fn from_parts(sigma: Vec<u32>, root: Option<u32>) -> Result<Self, MapError> {
        let darts = sigma.len();
        if darts % 2 == 1 {
            return Err(MapError::OddDarts);
        }
        let mut seen = vec![false; darts];
        for &s in &sigma {
            let s = s as usize;
            if s >= darts || seen[s] {
                return Err(MapError::NotPermutation(darts));
            }
            seen[s] = true;
        }
        match root {
            None if darts > 0 => return Err(MapError::MissingRoot),
            Some(r) if r as usize >= darts => return Err(MapError::BadRoot(r)),
            _ => {}
        }
        let map = RootedMap { sigma, root };
        if darts > 0 && map.reachable_from(0).len() != darts {
            return Err(MapError::Disconnected);
        }
        Ok(map)
    }

    pub fn n_edges(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn n_darts(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn sigma(&self) -> &[u32] {
        &self.sigma
    }

    pub fn root(&self) -> Option<u32> {
        self.root
    }

    fn reachable_from(&self, start: u32) -> Vec<u32> {
        let mut seen = vec![false; self.sigma.len()];
        let mut order = Vec::with_capacity(self.sigma.len());
        let mut queue = VecDeque::from([start]);
        seen[start as usize] = true;
        while let Some(d) = queue.pop_front() {
            order.push(d);
            for next in [self.sigma[d as usize], d ^ 1] {
                if !seen[next as usize] {
                    seen[next as usize] = true;
                    queue.push_back(next);
                }
            }
        }
        order
    }

    /// Vertex index of each dart (orbits of `sigma`, numbered by smallest
    /// dart) and the number of vertices.
    fn vertex_labels(&self) -> (Vec<usize>, usize) {
        orbit_labels(self.sigma.len(), |d| self.sigma[d] as usize)
    }

    fn face_labels(&self) -> (Vec<usize>, usize) {
        orbit_labels(self.sigma.len(), |d| self.sigma[d ^ 1] as usize)
    }

    /// Rename edges by `edge_perm` (old edge `e` becomes `edge_perm[e]`) and
    /// swap the two darts of every edge with `flip[e]` set. The result is the
    /// same rooted map under different labels.
    pub fn relabeled(&self, edge_perm: &[usize], flip: &[bool]) -> RootedMap {
        let rename = |d: u32| -> u32 {
            let e = (d / 2) as usize;
            (2 * edge_perm[e]) as u32 + ((d & 1) ^ u32::from(flip[e]))
        };
        let mut sigma = vec![0; self.sigma.len()];
        for (d, &s) in self.sigma.iter().enumerate() {
            sigma[rename(d as u32) as usize] = rename(s);
        }
        RootedMap {
            sigma,
            root: self.root.map(rename),
        }
    }
}

fn orbit_labels(darts: usize, next: impl Fn(usize) -> usize) -> (Vec<usize>, usize) {
    let mut label = vec![usize::MAX; darts];
    let mut count = 0;
    for start in 0..darts {
        if label[start] != usize::MAX {
            continue;
        }
        let mut d = start;
        while label[d] == usize::MAX {
            label[d] = count;
            d = next(d);
        }
        count += 1;
    }
    (label, count)
}

/// One step of the recursive construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructionStep {
    Isthmus { top_size: usize, bottom_size: usize },
    Insert { position: usize },
}

/// The last construction step of a map together with the smaller map(s) it
/// was applied to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Isthmus { top: RootedMap, bottom: RootedMap },
    Insert { parent: RootedMap, position: usize },
}

impl Decomposition {
    pub fn step(&self) -> ConstructionStep {
        match self {
            Decomposition::Isthmus { top, bottom } => ConstructionStep::Isthmus {
                top_size: top.n_edges(),
                bottom_size: bottom.n_edges(),
            },
            Decomposition::Insert { position, .. } => ConstructionStep::Insert {
                position: *position,
            },
        }
    }

    /// Re-apply the step.
    pub fn rebuild(&self) -> RootedMap {
        match self {
            Decomposition::Isthmus { top, bottom } => build_isthmus(top, bottom),
            Decomposition::Insert { parent, position } => {
                build_insert(parent, *position).expect("decomposed position is in range")
            }
        }
    }
}

/// Put dart `new` immediately before `before` in the rotation of `before`.
fn splice_before(sigma: &mut [u32], inverse: &mut [u32], new: u32, before: u32) {
    let prev = inverse[before as usize];
    sigma[prev as usize] = new;
    inverse[new as usize] = prev;
    sigma[new as usize] = before;
    inverse[before as usize] = new;
}

fn fixed_point(sigma: &mut [u32], inverse: &mut [u32], d: u32) {
    sigma[d as usize] = d;
    inverse[d as usize] = d;
}

/// Join the roots of `top` and `bottom` by a new edge. The new edge is the
/// last one; `top` keeps its dart labels and `bottom`'s are shifted past them.
/// The new root dart sits in `top`'s root corner, so the root degree is
/// `top`'s plus one.
pub fn build_isthmus(top: &RootedMap, bottom: &RootedMap) -> RootedMap {
    let offset = top.n_darts() as u32;
    let darts = top.n_darts() + bottom.n_darts() + 2;
    let a = (darts - 2) as u32;
    let b = a + 1;
    let mut sigma: Vec<u32> = Vec::with_capacity(darts);
    sigma.extend_from_slice(&top.sigma);
    sigma.extend(bottom.sigma.iter().map(|&s| s + offset));
    sigma.extend([a, b]);
    let mut inverse = vec![0; darts];
    for (d, &s) in sigma.iter().enumerate() {
        inverse[s as usize] = d as u32;
    }
    match top.root {
        Some(r) => splice_before(&mut sigma, &mut inverse, a, r),
        None => fixed_point(&mut sigma, &mut inverse, a),
    }
    match bottom.root {
        Some(r) => splice_before(&mut sigma, &mut inverse, b, r + offset),
        None => fixed_point(&mut sigma, &mut inverse, b),
    }
    RootedMap {
        sigma,
        root: Some(a),
    }
}

/// Add a new root edge to `parent` from its root corner.
///
/// The new root dart `a` goes just before the old root `r`. Its partner `b`
/// goes just before dart `position` when `position < 2n` (for `position = r`
/// that gives `a, b, r`), or just before `a` when `position = 2n` (giving
/// `b, a, r`).
pub fn build_insert(parent: &RootedMap, position: usize) -> Result<RootedMap, MapError> {
    let n_darts = parent.n_darts();
    if position > n_darts {
        return Err(MapError::PositionOutOfRange {
            position,
            max: n_darts,
        });
    }
    let a = n_darts as u32;
    let b = a + 1;
    let mut sigma = parent.sigma.clone();
    sigma.extend([a, b]);
    let Some(r) = parent.root else {
        // Only insertion into the empty map: the loop.
        sigma[a as usize] = b;
        sigma[b as usize] = a;
        return Ok(RootedMap {
            sigma,
            root: Some(a),
        });
    };
    let mut inverse = vec![0; n_darts + 2];
    for (d, &s) in sigma.iter().enumerate() {
        inverse[s as usize] = d as u32;
    }
    splice_before(&mut sigma, &mut inverse, a, r);
    let target = if position == n_darts {
        a
    } else {
        position as u32
    };
    splice_before(&mut sigma, &mut inverse, b, target);
    Ok(RootedMap {
        sigma,
        root: Some(a),
    })
}

/// Rebuild the submap made of `darts` (whole edges, none of them the removed
/// root edge) with edges renumbered in increasing order. `skip` maps a dart
/// to its successor once the removed darts are jumped over.
fn extract(
    map: &RootedMap,
    darts: &[u32],
    skip: &dyn Fn(u32) -> u32,
    root: Option<u32>,
) -> RootedMap {
    let mut edges: Vec<u32> = darts.iter().map(|d| d / 2).collect();
    edges.sort_unstable();
    edges.dedup();
    let mut new_edge = vec![u32::MAX; map.n_edges()];
    for (i, &e) in edges.iter().enumerate() {
        new_edge[e as usize] = i as u32;
    }
    let rename = |d: u32| 2 * new_edge[(d / 2) as usize] + (d & 1);
    let mut sigma = vec![0; 2 * edges.len()];
    for &e in &edges {
        for d in [2 * e, 2 * e + 1] {
            sigma[rename(d) as usize] = rename(skip(d));
        }
    }
    RootedMap {
        sigma,
        root: root.map(rename),
    }
}

/// Undo the last construction step.
///
/// Darts of the smaller map(s) keep their relative order, so
/// `decompose(build_*(...))` returns exactly the inputs when they were
/// produced by the builders.
pub fn decompose(map: &RootedMap) -> Result<Decomposition, MapError> {
    let a = map.root.ok_or(MapError::Empty)?;
    let b = a ^ 1;
    let sigma = &map.sigma;
    let skip = |d: u32| -> u32 {
        let mut s = sigma[d as usize];
        while s == a || s == b {
            s = sigma[s as usize];
        }
        s
    };
    // First dart after `x` around its vertex once the root edge is gone, or
    // `None` if the vertex has no other dart.
    let neighbour = |x: u32| -> Option<u32> {
        let mut s = sigma[x as usize];
        while s == a || s == b {
            if s == x {
                return None;
            }
            s = sigma[s as usize];
        }
        Some(s)
    };

    if map.n_edges() == 1 {
        return Ok(if sigma[a as usize] == b {
            Decomposition::Insert {
                parent: RootedMap::empty(),
                position: 0,
            }
        } else {
            Decomposition::Isthmus {
                top: RootedMap::empty(),
                bottom: RootedMap::empty(),
            }
        });
    }

    let top_start = neighbour(a);
    let bottom_start = neighbour(b);
    let component = |start: Option<u32>| -> Vec<u32> {
        let Some(start) = start else {
            return Vec::new();
        };
        let mut seen = vec![false; sigma.len()];
        seen[a as usize] = true;
        seen[b as usize] = true;
        seen[start as usize] = true;
        let mut stack = vec![start];
        let mut out = Vec::new();
        while let Some(d) = stack.pop() {
            out.push(d);
            for next in [skip(d), d ^ 1] {
                if !seen[next as usize] {
                    seen[next as usize] = true;
                    stack.push(next);
                }
            }
        }
        out
    };

    let top_darts = component(top_start);
    // A loop always finds its other end in the top component.
    let bridge = match bottom_start {
        None => true,
        Some(bs) => !top_darts.contains(&bs),
    };

    if bridge {
        let bottom_darts = component(bottom_start);
        let top = extract(map, &top_darts, &skip, top_start);
        let bottom = extract(map, &bottom_darts, &skip, bottom_start);
        return Ok(Decomposition::Isthmus { top, bottom });
    }

    let all: Vec<u32> = (0..map.n_darts() as u32)
        .filter(|&d| d != a && d != b)
        .collect();
    let parent_root = top_start.expect("non-bridge root edge has another dart at the root vertex");
    let parent = extract(map, &all, &skip, Some(parent_root));
    let after_b = sigma[b as usize];
    let position = if after_b == a {
        parent.n_darts()
    } else {
        // dart labels in the parent: edges above the root edge move down by one
        let e = after_b / 2;
        let root_edge = a / 2;
        let renamed_edge = if e > root_edge { e - 1 } else { e };
        (2 * renamed_edge + (after_b & 1)) as usize
    };
    Ok(Decomposition::Insert { parent, position })
}

/// Every statistic that can be read off a single map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapStat {
    Vertices,
    Leaves,
    Loops,
    RootEdges,
    RootDegree,
    RootFaceDegree,
    Genus,
    RootIsthmicParts,
}

impl MapStat {
    pub const ALL: [MapStat; 8] = [
        MapStat::Vertices,
        MapStat::Leaves,
        MapStat::Loops,
        MapStat::RootEdges,
        MapStat::RootDegree,
        MapStat::RootFaceDegree,
        MapStat::Genus,
        MapStat::RootIsthmicParts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MapStat::Vertices => "vertices",
            MapStat::Leaves => "leaves",
            MapStat::Loops => "loops",
            MapStat::RootEdges => "root_edges",
            MapStat::RootDegree => "root_degree",
            MapStat::RootFaceDegree => "root_face_degree",
            MapStat::Genus => "genus",
            MapStat::RootIsthmicParts => "root_isthmic",
        }
    }

    pub fn parse(s: &str) -> Option<MapStat> {
        if let Ok(stat) = s.parse::<Statistic>() {
            return Some(stat.into());
        }
        match s {
            "root_face_degree" => Some(MapStat::RootFaceDegree),
            "genus" => Some(MapStat::Genus),
            _ => None,
        }
    }
}

impl From<Statistic> for MapStat {
    fn from(s: Statistic) -> Self {
        match s {
            Statistic::Vertices => MapStat::Vertices,
            Statistic::Leaves => MapStat::Leaves,
            Statistic::Loops => MapStat::Loops,
            Statistic::RootEdges => MapStat::RootEdges,
            Statistic::RootDegree => MapStat::RootDegree,
            Statistic::RootIsthmic => MapStat::RootIsthmicParts,
        }
    }
}

/// Value of `which` on `map`.
///
/// Leaves are degree-one vertices other than the root vertex; the empty map
/// counts as one leaf. Loops add two to the root degree and one to the
/// number of root edges.
pub fn stat(map: &RootedMap, which: MapStat) -> usize {
    let Some(root) = map.root else {
        return match which {
            MapStat::Vertices | MapStat::Leaves => 1,
            _ => 0,
        };
    };
    let root = root as usize;
    match which {
        MapStat::Vertices => map.vertex_labels().1,
        MapStat::RootDegree => {
            let (v, _) = map.vertex_labels();
            v.iter().filter(|&&x| x == v[root]).count()
        }
        MapStat::RootEdges => {
            let (v, _) = map.vertex_labels();
            (0..map.n_edges())
                .filter(|&e| v[2 * e] == v[root] || v[2 * e + 1] == v[root])
                .count()
        }
        MapStat::Loops => {
            let (v, _) = map.vertex_labels();
            (0..map.n_edges())
                .filter(|&e| v[2 * e] == v[2 * e + 1])
                .count()
        }
        MapStat::Leaves => {
            let (v, count) = map.vertex_labels();
            let mut degree = vec![0usize; count];
            for &x in &v {
                degree[x] += 1;
            }
            degree
                .iter()
                .enumerate()
                .filter(|&(i, &d)| d == 1 && i != v[root])
                .count()
        }
        MapStat::RootFaceDegree => {
            let (f, _) = map.face_labels();
            f.iter().filter(|&&x| x == f[root]).count()
        }
        MapStat::Genus => genus(map),
        MapStat::RootIsthmicParts => {
            let mut count = 0;
            let mut current = map.clone();
            while !current.is_empty() {
                current = match decompose(&current).expect("nonempty") {
                    Decomposition::Isthmus { top, .. } => {
                        count += 1;
                        top
                    }
                    Decomposition::Insert { parent, .. } => parent,
                };
            }
            count
        }
    }
}

/// `V - E + F = 2 - 2g`.
pub fn genus(map: &RootedMap) -> usize {
    if map.is_empty() {
        return 0;
    }
    let v = map.vertex_labels().1 as i64;
    let f = map.face_labels().1 as i64;
    let chi = v - map.n_edges() as i64 + f;
    debug_assert!(chi <= 2 && (2 - chi) % 2 == 0, "Euler characteristic {chi}");
    ((2 - chi) / 2) as usize
}

/// Euler characteristic `V - E + F`.
pub fn euler_characteristic(map: &RootedMap) -> i64 {
    if map.is_empty() {
        return 2;
    }
    map.vertex_labels().1 as i64 - map.n_edges() as i64 + map.face_labels().1 as i64
}

/// Root-anchored canonical form: darts are renumbered in breadth-first order
/// from the root (neighbours `sigma(d)` then `alpha(d)`), and the encoding
/// lists `n`, then `sigma` and `alpha` in the new labels, as little-endian
/// `u32`s. Two maps have equal encodings iff they are isomorphic as rooted
/// maps.
pub fn canonical_encode(map: &RootedMap) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + 8 * map.n_darts());
    out.extend_from_slice(&(map.n_edges() as u32).to_le_bytes());
    let Some(root) = map.root else { return out };
    let order = map.reachable_from(root);
    let mut label = vec![0u32; map.n_darts()];
    for (i, &d) in order.iter().enumerate() {
        label[d as usize] = i as u32;
    }
    for &d in &order {
        out.extend_from_slice(&label[map.sigma[d as usize] as usize].to_le_bytes());
        out.extend_from_slice(&label[(d ^ 1) as usize].to_le_bytes());
    }
    out
}

/// All maps with `n` edges, each exactly once: first every insertion (parents
/// in order, positions `0..2n-1`), then every isthmus (top size `k` ascending,
/// tops outer, bottoms inner). This is the order of [`unrank_map`].
pub fn enumerate_maps(n: usize) -> MapIter {
    let mut layers: Vec<Vec<RootedMap>> = Vec::with_capacity(n);
    for size in 0..n {
        let layer: Vec<RootedMap> = MapIter::new(&layers, size).collect();
        layers.push(layer);
    }
    MapIter::owned(layers, n)
}

/// Streaming enumerator returned by [`enumerate_maps`].
pub struct MapIter {
    layers: Vec<Vec<RootedMap>>,
    n: usize,
    state: IterState,
}

enum IterState {
    Empty { done: bool },
    Insert { parent: usize, position: usize },
    Isthmus { k: usize, top: usize, bottom: usize },
    Done,
}

impl MapIter {
    fn new(layers: &[Vec<RootedMap>], n: usize) -> MapIter {
        MapIter::owned(layers.to_vec(), n)
    }

    fn owned(layers: Vec<Vec<RootedMap>>, n: usize) -> MapIter {
        let state = if n == 0 {
            IterState::Empty { done: false }
        } else {
            IterState::Insert {
                parent: 0,
                position: 0,
            }
        };
        MapIter { layers, n, state }
    }
}

impl Iterator for MapIter {
    type Item = RootedMap;

    fn next(&mut self) -> Option<RootedMap> {
        loop {
            match self.state {
                IterState::Done => return None,
                IterState::Empty { done } => {
                    if done {
                        self.state = IterState::Done;
                        return None;
                    }
                    self.state = IterState::Empty { done: true };
                    return Some(RootedMap::empty());
                }
                IterState::Insert { parent, position } => {
                    let parents = &self.layers[self.n - 1];
                    if parent == parents.len() {
                        self.state = IterState::Isthmus {
                            k: 0,
                            top: 0,
                            bottom: 0,
                        };
                        continue;
                    }
                    let child =
                        build_insert(&parents[parent], position).expect("position in range");
                    self.state = if position + 1 == 2 * self.n - 1 {
                        IterState::Insert {
                            parent: parent + 1,
                            position: 0,
                        }
                    } else {
                        IterState::Insert {
                            parent,
                            position: position + 1,
                        }
                    };
                    return Some(child);
                }
                IterState::Isthmus { k, top, bottom } => {
                    if k == self.n {
                        self.state = IterState::Done;
                        return None;
                    }
                    let tops = &self.layers[k];
                    let bottoms = &self.layers[self.n - 1 - k];
                    if top == tops.len() {
                        self.state = IterState::Isthmus {
                            k: k + 1,
                            top: 0,
                            bottom: 0,
                        };
                        continue;
                    }
                    let child = build_isthmus(&tops[top], &bottoms[bottom]);
                    self.state = if bottom + 1 == bottoms.len() {
                        IterState::Isthmus {
                            k,
                            top: top + 1,
                            bottom: 0,
                        }
                    } else {
                        IterState::Isthmus {
                            k,
                            top,
                            bottom: bottom + 1,
                        }
                    };
                    return Some(child);
                }
            }
        }
    }
}

/// The `rank`-th map with `n` edges in [`enumerate_maps`] order.
///
/// `counts` must reach `n`.
pub fn unrank_map(n: usize, rank: &BigUint, counts: &MapCounts) -> Result<RootedMap, MapError> {
    let m = |k: usize| counts.get(k).expect("counts cover n").magnitude();
    if rank >= m(n) {
        return Err(MapError::RankOutOfRange);
    }
    Ok(unrank_inner(n, rank.clone(), &m))
}

fn unrank_inner<'a>(n: usize, rank: BigUint, m: &impl Fn(usize) -> &'a BigUint) -> RootedMap {
    if n == 0 {
        return RootedMap::empty();
    }
    let choices = BigUint::from(2 * n - 1);
    let insert_block = m(n - 1) * &choices;
    if rank < insert_block {
        let (parent_rank, position) = rank.div_rem(&choices);
        let parent = unrank_inner(n - 1, parent_rank, m);
        let position = position.to_usize().expect("position < 2n - 1");
        return build_insert(&parent, position).expect("position in range");
    }
    let mut rest = rank - insert_block;
    for k in 0..n {
        let bottoms = m(n - 1 - k);
        let block = m(k) * bottoms;
        if rest < block {
            let (top_rank, bottom_rank) = rest.div_rem(bottoms);
            let top = unrank_inner(k, top_rank, m);
            let bottom = unrank_inner(n - 1 - k, bottom_rank, m);
            return build_isthmus(&top, &bottom);
        }
        rest -= block;
    }
    unreachable!("rank below m_n always lands in a block")
}

/// Exactly uniform random map with `n` edges.
///
/// Draws a uniform rank below `m_n` and unranks it, which is the recursive
/// method: the insert step is taken with probability `(2n-1) m_{n-1} / m_n`,
/// the isthmus split `k` with probability `m_k m_{n-1-k} / m_n`, and the
/// remaining digits of the rank pick the position and the smaller maps
/// uniformly.
pub fn sample_map<R: Rng + ?Sized>(n: usize, counts: &MapCounts, rng: &mut R) -> RootedMap {
    let total = counts.get(n).expect("counts cover n").magnitude();
    debug_assert!(!total.is_zero());
    let rank = rng.gen_biguint_below(total);
    unrank_inner(n, rank, &|k| {
        counts.get(k).expect("counts cover n").magnitude()
    })
}
