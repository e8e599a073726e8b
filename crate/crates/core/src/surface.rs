//! Combinatorial ideal triangulations.
//!
//! A triangulation stores its triangles as cyclically ordered side lists
//! with the corner vertex after each side, so each side of a triangle runs
//! from the previous corner to its own corner. The exchange matrix rule
//! reads consecutive side pairs of that cyclic order as +1 contributions;
//! the stored order is the one that reproduces the reference matrices of
//! the builtin fixtures. Corners are what make flips and puncture
//! incidence updates unambiguous in the presence of loops and multi-edges.

use crate::seed::{ExchangeSeed, IndexSet};
use crate::{Error, Rat, Result};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub name: String,
    pub puncture: bool,
}

/// Sides in cyclic order; entry i is (edge, corner after that edge),
/// all 0-based. Side i runs from corner i-1 (cyclically) to corner i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangle {
    pub sides: [(usize, usize); 3],
}

/// Declared topology, used only for the arc-count cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceKind {
    pub genus: usize,
    pub punctures: usize,
    pub boundary_components: usize,
    pub boundary_marked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    pub n_edges: usize,
    /// Edges 0..n_interior are interior (unfrozen); the rest are boundary.
    pub n_interior: usize,
    pub vertices: Vec<Vertex>,
    pub triangles: Vec<Triangle>,
    pub surface: Option<SurfaceKind>,
}

impl Triangulation {
    pub fn validate(&self) -> Result<()> {
        let mut slots = vec![0usize; self.n_edges];
        for t in &self.triangles {
            for &(e, v) in &t.sides {
                if e >= self.n_edges {
                    return Err(Error::MalformedTriangulation(format!(
                        "edge {} out of range",
                        e + 1
                    )));
                }
                if v >= self.vertices.len() {
                    return Err(Error::MalformedTriangulation(format!(
                        "corner vertex {v} out of range"
                    )));
                }
                slots[e] += 1;
            }
        }
        for e in 0..self.n_edges {
            let want = if e < self.n_interior { 2 } else { 1 };
            if slots[e] != want {
                return Err(Error::MalformedTriangulation(format!(
                    "edge {} fills {} triangle slots, expected {}",
                    e + 1,
                    slots[e],
                    want
                )));
            }
        }
        // interior edges must be traversed once in each direction
        for e in 0..self.n_interior {
            let occ = self.occurrences(e);
            let (a1, b1) = self.slot_endpoints(occ[0]);
            let (a2, b2) = self.slot_endpoints(occ[1]);
            if (a1, b1) != (b2, a2) {
                return Err(Error::MalformedTriangulation(format!(
                    "edge {} is traversed incoherently by its two triangles",
                    e + 1
                )));
            }
        }
        if let Some(kind) = self.surface {
            let expected = 3 * (2 * kind.genus as i64 - 2
                + kind.punctures as i64
                + kind.boundary_components as i64)
                + 2 * kind.boundary_marked as i64;
            if expected != self.n_edges as i64 {
                return Err(Error::MalformedTriangulation(format!(
                    "declared surface needs {} arcs, triangulation has {}",
                    expected, self.n_edges
                )));
            }
        }
        Ok(())
    }

    /// (triangle, side) slots where the edge appears.
    fn occurrences(&self, edge: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for si in 0..3 {
                if t.sides[si].0 == edge {
                    out.push((ti, si));
                }
            }
        }
        out
    }

    /// Endpoints (from, to) of the side in a given slot.
    fn slot_endpoints(&self, (ti, si): (usize, usize)) -> (usize, usize) {
        let t = &self.triangles[ti];
        let from = t.sides[(si + 2) % 3].1;
        let to = t.sides[si].1;
        (from, to)
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.slot_endpoints(self.occurrences(edge)[0])
    }

    /// (inner edge, encircling edge) pairs of self-folded triangles.
    pub fn self_folded(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for t in &self.triangles {
            let e = [t.sides[0].0, t.sides[1].0, t.sides[2].0];
            for i in 0..3 {
                if e[i] == e[(i + 1) % 3] {
                    out.push((e[i], e[(i + 2) % 3]));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn is_self_folded_triangle(&self, t: &Triangle) -> bool {
        let e = [t.sides[0].0, t.sides[1].0, t.sides[2].0];
        e[0] == e[1] || e[1] == e[2] || e[2] == e[0]
    }

    /// Inner edge of a self-folded triangle maps to its encircling edge.
    fn pi(&self, edge: usize) -> usize {
        for (inner, outer) in self.self_folded() {
            if edge == inner {
                return outer;
            }
        }
        edge
    }

    /// Exchange matrix: summed over non-self-folded triangles, an ordered
    /// consecutive side pair contributes +1, through the self-folded
    /// relabeling map. Boundary edges come out frozen.
    pub fn b_matrix(&self) -> Result<ExchangeSeed> {
        self.validate()?;
        let n = self.n_edges;
        let mut b = vec![vec![Rat::zero(); n]; n];
        let pre: Vec<Vec<usize>> = (0..n)
            .map(|img| (0..n).filter(|&e| self.pi(e) == img).collect())
            .collect();
        for t in &self.triangles {
            if self.is_self_folded_triangle(t) {
                continue;
            }
            for i in 0..3 {
                let u = t.sides[i].0;
                let w = t.sides[(i + 1) % 3].0;
                for &alpha in &pre[u] {
                    for &beta in &pre[w] {
                        b[alpha][beta] += crate::rat_int(1);
                        b[beta][alpha] -= crate::rat_int(1);
                    }
                }
            }
        }
        ExchangeSeed::new(IndexSet::new(n, self.n_interior)?, b)
    }

    /// Flip an interior edge: quadrilateral rewiring, keeping the label on
    /// the new arc. Rejects boundary edges and self-folded inner edges.
    pub fn flip(&self, edge: usize) -> Result<Triangulation> {
        if edge >= self.n_edges {
            return Err(Error::MalformedTriangulation(format!("no edge {}", edge + 1)));
        }
        if edge >= self.n_interior {
            return Err(Error::BoundaryFlip(edge + 1));
        }
        let occ = self.occurrences(edge);
        debug_assert_eq!(occ.len(), 2);
        if occ[0].0 == occ[1].0 {
            return Err(Error::TaggedFlipRequired(edge + 1));
        }
        let rot = |(ti, si): (usize, usize)| -> [(usize, usize); 3] {
            let s = &self.triangles[ti].sides;
            [s[si], s[(si + 1) % 3], s[(si + 2) % 3]]
        };
        // first triangle: alpha runs v2 -> v0, then sides b: v0 -> v1, c: v1 -> v2
        let t1 = rot(occ[0]);
        let t2 = rot(occ[1]);
        let (v0, v1, v2) = (t1[0].1, t1[1].1, t1[2].1);
        let (u0, u1, u2) = (t2[0].1, t2[1].1, t2[2].1);
        if (u2, u0) != (v0, v2) {
            return Err(Error::MalformedTriangulation(format!(
                "edge {} traversed incoherently",
                edge + 1
            )));
        }
        let (b, c) = (t1[1].0, t1[2].0);
        let (d, e) = (t2[1].0, t2[2].0);
        let new1 = Triangle { sides: [(c, v2), (d, u1), (edge, v1)] };
        let new2 = Triangle { sides: [(e, v0), (b, v1), (edge, u1)] };
        let mut out = self.clone();
        out.triangles[occ[0].0] = new1;
        out.triangles[occ[1].0] = new2;
        out.validate()?;
        Ok(out)
    }

    /// Puncture incidence: per puncture (in vertex order), the interior
    /// arcs with endpoint multiplicity 1 or 2.
    pub fn puncture_incidence(&self) -> Vec<(String, Vec<(usize, usize)>)> {
        let mut out = Vec::new();
        for (vi, v) in self.vertices.iter().enumerate() {
            if !v.puncture {
                continue;
            }
            let mut arcs = Vec::new();
            for e in 0..self.n_interior {
                let (a, b) = self.endpoints(e);
                let mult = (a == vi) as usize + (b == vi) as usize;
                if mult > 0 {
                    arcs.push((e, mult));
                }
            }
            out.push((v.name.clone(), arcs));
        }
        out
    }

    /// Canonical form for comparisons up to triangle order and rotation.
    pub fn canonical_triangles(&self) -> Vec<[(usize, usize); 3]> {
        let mut tris: Vec<[(usize, usize); 3]> = self
            .triangles
            .iter()
            .map(|t| {
                let mut best = t.sides;
                for r in 1..3 {
                    let cand = [t.sides[r % 3], t.sides[(r + 1) % 3], t.sides[(r + 2) % 3]];
                    if cand < best {
                        best = cand;
                    }
                }
                best
            })
            .collect();
        tris.sort_unstable();
        tris
    }
}

fn vertex(name: &str, puncture: bool) -> Vertex {
    Vertex { name: name.to_string(), puncture }
}

fn tri(sides: [(usize, usize); 3]) -> Triangle {
    // fixture data is 1-based for legibility; shift here
    Triangle { sides: sides.map(|(e, v)| (e - 1, v)) }
}

/// Annulus with one marked point on each boundary circle. Arcs 1, 2 are
/// the interior diagonals; 3 is the inner boundary, 4 the outer. Produces
/// b_12 = -2.
pub fn annulus_dehn() -> Triangulation {
    // vertices: 0 = inner marked point, 1 = outer marked point
    let t = Triangulation {
        n_edges: 4,
        n_interior: 2,
        vertices: vec![vertex("inner", false), vertex("outer", false)],
        triangles: vec![tri([(3, 0), (2, 1), (1, 0)]), tri([(4, 1), (2, 0), (1, 1)])],
        surface: Some(SurfaceKind {
            genus: 0,
            punctures: 0,
            boundary_components: 2,
            boundary_marked: 2,
        }),
    };
    debug_assert!(t.validate().is_ok());
    t
}

/// Sphere with four punctures: two triangles inside a square with both
/// diagonals realized (arcs 1 and 4 both join the north and south
/// punctures) plus the two back faces.
pub fn sphere4() -> Triangulation {
    // vertices: 0 = N, 1 = W, 2 = S, 3 = E
    let t = Triangulation {
        n_edges: 6,
        n_interior: 6,
        vertices: vec![
            vertex("N", true),
            vertex("W", true),
            vertex("S", true),
            vertex("E", true),
        ],
        triangles: vec![
            tri([(4, 2), (2, 1), (3, 0)]),
            tri([(6, 3), (5, 2), (4, 0)]),
            tri([(3, 1), (2, 2), (1, 0)]),
            tri([(6, 0), (1, 2), (5, 3)]),
        ],
        surface: Some(SurfaceKind {
            genus: 0,
            punctures: 4,
            boundary_components: 0,
            boundary_marked: 0,
        }),
    };
    debug_assert!(t.validate().is_ok());
    t
}

/// Once-punctured genus-2 surface from an identified octagon: sides 2,3,4,5
/// appear in two triangles each through the identification, chords
/// 1,6,7,8,9 are the diagonals. All arcs end at the unique puncture.
pub fn genus2() -> Triangulation {
    let t = Triangulation {
        n_edges: 9,
        n_interior: 9,
        vertices: vec![vertex("p", true)],
        triangles: vec![
            tri([(6, 0), (3, 0), (2, 0)]),
            tri([(7, 0), (2, 0), (6, 0)]),
            tri([(1, 0), (3, 0), (7, 0)]),
            tri([(4, 0), (8, 0), (1, 0)]),
            tri([(9, 0), (4, 0), (5, 0)]),
            tri([(8, 0), (5, 0), (9, 0)]),
        ],
        surface: Some(SurfaceKind {
            genus: 2,
            punctures: 1,
            boundary_components: 0,
            boundary_marked: 0,
        }),
    };
    debug_assert!(t.validate().is_ok());
    t
}

pub fn builtin_triangulation(name: &str) -> Result<Triangulation> {
    match name {
        "annulus_dehn" | "annulus" => Ok(annulus_dehn()),
        "sphere4" | "sphere4_pa" => Ok(sphere4()),
        "genus2" | "genus2_dehn" => Ok(genus2()),
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::ExchangeSeed;

    #[test]
    fn annulus_matrix() {
        let b = annulus_dehn().b_matrix().unwrap();
        let expect = ExchangeSeed::from_i64(
            2,
            vec![
                vec![0, -2, 1, 1],
                vec![2, 0, -1, -1],
                vec![-1, 1, 0, 0],
                vec![-1, 1, 0, 0],
            ],
        );
        assert_eq!(b, expect);
    }

    #[test]
    fn sphere4_matrix() {
        let b = sphere4().b_matrix().unwrap();
        let expect = ExchangeSeed::from_i64(
            6,
            vec![
                vec![0, -1, 1, 0, 1, -1],
                vec![1, 0, 0, -1, 0, 0],
                vec![-1, 0, 0, 1, 0, 0],
                vec![0, 1, -1, 0, -1, 1],
                vec![-1, 0, 0, 1, 0, 0],
                vec![1, 0, 0, -1, 0, 0],
            ],
        );
        assert_eq!(b, expect);
    }

    #[test]
    fn genus2_matrix_row6() {
        let b = genus2().b_matrix().unwrap();
        let row: Vec<i64> = (0..9)
            .map(|j| {
                use num_traits::ToPrimitive;
                b.entry(5, j).to_integer().to_i64().unwrap()
            })
            .collect();
        assert_eq!(row, vec![0, -2, 1, 0, 0, 0, 1, 0, 0]);
    }

    #[test]
    fn builtin_shapes() {
        let a = annulus_dehn();
        assert_eq!((a.n_edges, a.n_interior), (4, 2));
        let s = sphere4();
        assert_eq!((s.n_edges, s.n_interior), (6, 6));
        assert_eq!(s.puncture_incidence().len(), 4);
        let g = genus2();
        assert_eq!((g.n_edges, g.n_interior), (9, 9));
        assert_eq!(g.puncture_incidence().len(), 1);
    }

    #[test]
    fn sphere4_incidence() {
        let inc = sphere4().puncture_incidence();
        let degree: Vec<usize> = inc
            .iter()
            .map(|(_, arcs)| arcs.iter().map(|&(_, m)| m).sum())
            .collect();
        assert_eq!(degree, vec![4, 2, 4, 2]);
        // every interior edge has two endpoint slots
        let total: usize = degree.iter().sum();
        assert_eq!(total, 2 * sphere4().n_interior);
    }

    #[test]
    fn flip_is_involutive() {
        for t in [annulus_dehn(), sphere4(), genus2()] {
            for e in 0..t.n_interior {
                let once = t.flip(e).unwrap();
                let twice = once.flip(e).unwrap();
                assert_eq!(twice.canonical_triangles(), t.canonical_triangles());
            }
        }
    }

    #[test]
    fn flip_matches_mutation() {
        for t in [annulus_dehn(), sphere4(), genus2()] {
            let b = t.b_matrix().unwrap();
            for e in 0..t.n_interior {
                let flipped = t.flip(e).unwrap();
                assert_eq!(flipped.b_matrix().unwrap(), b.mutate(e).unwrap());
            }
        }
    }

    #[test]
    fn boundary_flip_rejected() {
        assert!(matches!(annulus_dehn().flip(2), Err(Error::BoundaryFlip(3))));
    }

    #[test]
    fn casimir_totals_balance() {
        let t = sphere4();
        let inc = t.puncture_incidence();
        let sum: usize = inc
            .iter()
            .flat_map(|(_, arcs)| arcs.iter().map(|&(_, m)| m))
            .sum();
        assert_eq!(sum, 12);
    }
}
