use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use super::cover::ColoredCubeSet;
use super::index::BucketIndex;
use super::scenario::World;
use crate::geometry::{Aabb, Point, Rat, RectilinearRegion};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphVertex {
    /// The cube sitting at this vertex, or `None` where a vertical edge
    /// crosses a horizontal one.
    pub cube: Option<usize>,
    pub bbox: Aabb,
}

/// Same-colour cubes of one chart joined to their nearest neighbours along
/// each axis, when the segment between them is admissible.
#[derive(Debug, Clone, Serialize)]
pub struct NeighbourGraph {
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<(usize, usize)>,
    /// Pairs (edge, cube) where a cube other than the endpoints meets the
    /// interior of the edge's hull. Zero on every lattice instance.
    pub third_cube_hits: usize,
}

impl NeighbourGraph {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for v in &mut adj {
            v.sort_unstable();
        }
        adj
    }

    /// BFS tree from `root`: parent and depth of every reached vertex.
    pub fn bfs_tree(&self, root: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
        let adj = self.adjacency();
        let mut parent = vec![None; self.vertices.len()];
        let mut depth = vec![None; self.vertices.len()];
        depth[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if depth[w].is_none() {
                    depth[w] = Some(depth[v].expect("visited") + 1);
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        (parent, depth)
    }
}

/// Graph of colour `j` in chart `i`, keeping edges whose hull lies in the
/// chart and has no interior point in `forbidden`.
pub fn build_neighbour_graph(
    world: &World,
    cubes: &ColoredCubeSet,
    chart: usize,
    color: usize,
    forbidden: &RectilinearRegion,
) -> NeighbourGraph {
    let members: Vec<(usize, Aabb)> = cubes
        .of_color(color)
        .filter(|c| c.chart == chart)
        .map(|c| (c.id, c.bbox.clone()))
        .collect();
    let region = &world.charts[chart];
    graph_over(&members, world.scales[chart], |h| {
        region.contains_box(h) && !forbidden.overlaps_box(h)
    })
}

/// Neighbour graph over arbitrary equal cubes `(id, box)`.
pub(crate) fn graph_over(members: &[(usize, Aabb)], side: Rat, admit: impl Fn(&Aabb) -> bool) -> NeighbourGraph {
    let mut vertices: Vec<GraphVertex> = members
        .iter()
        .map(|(id, b)| GraphVertex {
            cube: Some(*id),
            bbox: b.clone(),
        })
        .collect();
    let mut index = BucketIndex::new(side, members.len());
    for (p, (_, b)) in members.iter().enumerate() {
        index.set(p, vec![b.clone()]);
    }
    // rows keyed by y, columns keyed by x, each sorted along the other axis
    let mut rows: BTreeMap<Rat, Vec<(Rat, usize)>> = BTreeMap::new();
    let mut cols: BTreeMap<Rat, Vec<(Rat, usize)>> = BTreeMap::new();
    for (p, (_, b)) in members.iter().enumerate() {
        rows.entry(*b.lo().at(1)).or_default().push((*b.lo().at(0), p));
        cols.entry(*b.lo().at(0)).or_default().push((*b.lo().at(1), p));
    }
    for v in rows.values_mut().chain(cols.values_mut()) {
        v.sort();
    }
    let mut third = 0;
    let mut check = |a: usize, b: usize| -> bool {
        let h = vertices[a].bbox.hull(&vertices[b].bbox);
        if !admit(&h) {
            return false;
        }
        third += index.touching(&h).into_iter().filter(|&q| q != a && q != b && index.blocked_by(q, &h)).count();
        true
    };
    let mut horizontal: HashMap<usize, usize> = HashMap::new();
    for row in rows.values() {
        for w in row.windows(2) {
            if check(w[0].1, w[1].1) {
                horizontal.insert(w[0].1, w[1].1);
            }
        }
    }
    let mut vertical: Vec<(usize, usize)> = Vec::new();
    for col in cols.values() {
        for w in col.windows(2) {
            if check(w[0].1, w[1].1) {
                vertical.push((w[0].1, w[1].1));
            }
        }
    }
    debug_assert_eq!(third, 0, "a third cube meets an edge hull");

    // split crossing edges at a crossing vertex
    let mut hsplits: HashMap<usize, Vec<(Rat, usize)>> = HashMap::new();
    let mut edges = Vec::new();
    for (a, b) in vertical {
        let x = *vertices[a].bbox.lo().at(0);
        let (y0, y1) = (*vertices[a].bbox.lo().at(1), *vertices[b].bbox.lo().at(1));
        let mut chain = vec![a];
        for (y, row) in rows.range(y0..y1) {
            if *y == y0 {
                continue;
            }
            let at = row.partition_point(|(rx, _)| *rx < x);
            if at == 0 || at == row.len() {
                continue;
            }
            let (l, r) = (row[at - 1].1, row[at].1);
            if horizontal.get(&l) != Some(&r) {
                continue;
            }
            let bbox = Aabb::cube(Point::xy(x, *y), side).expect("positive side");
            let c = vertices.len();
            vertices.push(GraphVertex { cube: None, bbox });
            hsplits.entry(l).or_default().push((x, c));
            chain.push(c);
        }
        chain.push(b);
        edges.extend(chain.windows(2).map(|w| (w[0], w[1])));
    }
    let mut hs: Vec<(usize, usize)> = horizontal.into_iter().collect();
    hs.sort_unstable();
    for (l, r) in hs {
        let mut chain = vec![l];
        if let Some(mut mids) = hsplits.remove(&l) {
            mids.sort();
            chain.extend(mids.into_iter().map(|(_, c)| c));
        }
        chain.push(r);
        edges.extend(chain.windows(2).map(|w| (w[0], w[1])));
    }
    edges.sort_unstable();
    NeighbourGraph {
        vertices,
        edges,
        third_cube_hits: third,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, rat};
    use crate::lattice_cover::build_cover;
    use crate::transport::build_colored_cover;
    use crate::transport::fixtures::single_chart;

    fn sq(x: Rat, y: Rat) -> Aabb {
        Aabb::cube(Point::xy(x, y), int(1)).unwrap()
    }

    #[test]
    fn two_neighbours_one_edge() {
        let m = vec![(0, sq(int(0), int(0))), (1, sq(int(3), int(0)))];
        let g = graph_over(&m, int(1), |_| true);
        assert_eq!(g.edges, vec![(0, 1)]);
        let strip = Aabb::rect(rat(3, 2), int(-5), int(2), int(5)).unwrap();
        let g = graph_over(&m, int(1), |h| !h.interiors_overlap(&strip));
        assert!(g.edges.is_empty());
    }

    #[test]
    fn vertical_edge_crossing_horizontal_gets_a_vertex() {
        let m = vec![
            (0, sq(int(0), int(0))),
            (1, sq(int(0), int(2))),
            (2, sq(rat(-3, 2), int(1))),
            (3, sq(rat(3, 2), int(1))),
        ];
        let g = graph_over(&m, int(1), |_| true);
        assert_eq!(g.vertices.len(), 5);
        assert_eq!(g.vertices[4].bbox, sq(int(0), int(1)));
        assert_eq!(g.edges.len(), 4);
        assert_eq!(g.third_cube_hits, 0);
        let (parent, depth) = g.bfs_tree(0);
        assert_eq!(parent[1], Some(4));
        assert_eq!(depth[3], Some(2));
    }

    #[test]
    fn full_window_has_no_third_cube_hits() {
        let s = single_chart(rat(1, 24), rat(1, 10));
        let w = World::build(&s, &s.scales()).unwrap();
        let set = build_colored_cover(&w, &build_cover(1, 3).unwrap()).unwrap();
        for j in 1..=3 {
            let g = build_neighbour_graph(&w, &set, 0, j, &RectilinearRegion::empty());
            assert_eq!(g.third_cube_hits, 0);
            let (_, depth) = g.bfs_tree(0);
            assert!(depth.iter().all(Option::is_some), "colour {j} graph is disconnected");
        }
    }
}
