//! Explicit cell structures paired with the symbolic descriptor they model.
//!
//! Used to cross-check [`Descriptor::betti`](super::Descriptor::betti)
//! against cellular homology.

use super::{Descriptor, RationalChainComplex};

/// Boundary of a triangle.
pub fn circle() -> RationalChainComplex {
    RationalChainComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]])
}

/// Boundary of a tetrahedron.
pub fn sphere2_tetrahedron() -> RationalChainComplex {
    RationalChainComplex::from_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
}

/// Two triangles glued along their common boundary (a Δ-complex, not simplicial).
pub fn sphere2_two_triangles() -> RationalChainComplex {
    let d1 = vec![vec![-1, 0, -1], vec![1, -1, 0], vec![0, 1, 1]];
    let d2 = vec![vec![1, -1], vec![1, -1], vec![-1, 1]];
    RationalChainComplex::from_integers(vec![3, 3, 2], vec![d1, d2]).expect("fixture shape")
}

/// Seven-vertex triangulation of the torus.
pub fn torus_seven_vertex() -> RationalChainComplex {
    let mut facets = Vec::new();
    for i in 0..7 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    RationalChainComplex::from_facets(&facets)
}

/// One 0-cell, `2g` 1-cells and one 2-cell attached along `Π [a_i, b_i]`.
pub fn surface_cw(genus: usize) -> RationalChainComplex {
    let d1 = vec![vec![0; 2 * genus]];
    let d2 = vec![vec![0]; 2 * genus];
    RationalChainComplex::from_integers(vec![1, 2 * genus, 1], vec![d1, d2]).expect("fixture shape")
}

/// Product cell structure on `S^1 × S^2`: one cell in each degree.
pub fn circle_times_sphere2() -> RationalChainComplex {
    RationalChainComplex::from_integers(
        vec![1, 1, 1, 1],
        vec![vec![vec![0]], vec![vec![0]], vec![vec![0]]],
    )
    .expect("fixture shape")
}

/// Every fixture with the descriptor it should agree with.
pub fn library() -> Vec<(&'static str, RationalChainComplex, Descriptor)> {
    vec![
        ("S^1 triangle", circle(), Descriptor::sphere(1)),
        ("S^2 tetrahedron", sphere2_tetrahedron(), Descriptor::sphere(2)),
        ("S^2 two triangles", sphere2_two_triangles(), Descriptor::sphere(2)),
        ("T^2 seven vertices", torus_seven_vertex(), Descriptor::torus()),
        ("T^2 cw", surface_cw(1), Descriptor::torus()),
        ("Sigma_2 cw", surface_cw(2), Descriptor::surface(2)),
        ("Sigma_3 cw", surface_cw(3), Descriptor::surface(3)),
        (
            "S^1 x S^2 cw",
            circle_times_sphere2(),
            Descriptor::product(Descriptor::sphere(1), Descriptor::sphere(2)),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_agrees_with_symbolic() {
        for (name, cc, desc) in library() {
            assert_eq!(cc.betti().unwrap(), desc.betti().unwrap(), "{name}");
        }
    }

    #[test]
    fn seven_vertex_torus_counts() {
        assert_eq!(torus_seven_vertex().cells, vec![7, 21, 14]);
    }
}
