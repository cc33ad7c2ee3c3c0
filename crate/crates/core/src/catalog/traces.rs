//! Witness traces for the catalog.

use crate::homology::Descriptor;
use crate::trace::{Attachment, ComponentId, Curve, OrderedHandleDecomposition};
use crate::union::{compose, GlueSpec};

fn h(j: usize) -> ComponentId {
    ComponentId::handle(j)
}

fn nonsep(anchor: ComponentId) -> Attachment {
    Attachment::Dim3Two {
        anchor,
        curve: Curve::NonSeparating,
    }
}

fn declared(replaces: Vec<ComponentId>, resulting: Vec<Descriptor>) -> Attachment {
    Attachment::Declared {
        replaces: Some(replaces),
        resulting,
    }
}

/// `h^0 ∪ h^m`.
pub fn sphere(m: usize) -> OrderedHandleDecomposition {
    let d = OrderedHandleDecomposition::new(m, vec![]);
    if m == 3 {
        d.with(0, Attachment::Dim3Zero).with(3, Attachment::Dim3Three { anchor: h(1) })
    } else {
        d.with(0, declared(vec![], vec![Descriptor::sphere(m - 1)]))
            .with(m, declared(vec![h(1)], vec![]))
    }
}

/// Genus-one Heegaard pattern `h^0 ∪ h^1 ∪ h^2 ∪ h^3`.
pub fn lens() -> OrderedHandleDecomposition {
    OrderedHandleDecomposition::new(3, vec![])
        .with(0, Attachment::Dim3Zero)
        .with(1, Attachment::Dim3One { a: h(1), b: h(1) })
        .with(2, nonsep(h(2)))
        .with(3, Attachment::Dim3Three { anchor: h(3) })
}

/// `n` genus-one patterns, each closed back to a sphere before the next.
pub fn rp3_sum(n: usize) -> OrderedHandleDecomposition {
    let mut d = OrderedHandleDecomposition::new(3, vec![]);
    let mut cur = h(d.push(0, Attachment::Dim3Zero));
    for _ in 0..n {
        cur = h(d.push(1, Attachment::Dim3One { a: cur, b: cur }));
        cur = h(d.push(2, nonsep(cur)));
    }
    d.push(3, Attachment::Dim3Three { anchor: cur });
    d
}

/// `S^{m-1} × S^1` as `h^0 ∪ h^1 ∪ h^{m-1} ∪ h^m`.
pub fn sphere_circle(m: usize) -> OrderedHandleDecomposition {
    if m == 3 {
        return lens();
    }
    let s = Descriptor::sphere(m - 1);
    OrderedHandleDecomposition::new(m, vec![])
        .with(0, declared(vec![], vec![s.clone()]))
        .with(
            1,
            declared(vec![h(1)], vec![Descriptor::product(Descriptor::sphere(m - 2), Descriptor::sphere(1))]),
        )
        .with(m - 1, declared(vec![h(2)], vec![s]))
        .with(m, declared(vec![h(3)], vec![]))
}

/// `h^0 ∪ h^1`, relative to the empty base.
pub fn solid_torus() -> OrderedHandleDecomposition {
    OrderedHandleDecomposition::new(3, vec![])
        .with(0, Attachment::Dim3Zero)
        .with(1, Attachment::Dim3One { a: h(1), b: h(1) })
}

/// `T^2 × [0,1] ∪ h^2 ∪ h^3`.
pub fn solid_torus_dual() -> OrderedHandleDecomposition {
    OrderedHandleDecomposition::new(3, vec![Descriptor::torus()])
        .with(2, nonsep(ComponentId::Base(0)))
        .with(3, Attachment::Dim3Three { anchor: h(1) })
}

/// Glue the boundary torus of [`solid_torus`] to the base of
/// [`solid_torus_dual`].
pub fn torus_glue() -> GlueSpec {
    GlueSpec::new(vec![(h(2), ComponentId::Base(0))])
}

/// `S^1 × (T^2 − disc)`: boundaries `S^2, T^2, Σ_2, Σ_3, Σ_2, T^2`.
pub fn punctured_torus_bundle() -> OrderedHandleDecomposition {
    OrderedHandleDecomposition::new(3, vec![])
        .with(0, Attachment::Dim3Zero)
        .with(1, Attachment::Dim3One { a: h(1), b: h(1) })
        .with(1, Attachment::Dim3One { a: h(2), b: h(2) })
        .with(1, Attachment::Dim3One { a: h(3), b: h(3) })
        .with(2, nonsep(h(4)))
        .with(2, nonsep(h(5)))
}

/// `S^1 × Σ_2` as the double of [`punctured_torus_bundle`].
pub fn s1_sigma2() -> OrderedHandleDecomposition {
    let n = punctured_torus_bundle();
    let dual = crate::trace::dualize(&n).expect("stored trace replays");
    let glue = GlueSpec::new(vec![(h(6), ComponentId::Base(0))]);
    compose(&n, &dual, &glue).expect("double glues").decomposition
}

/// Double of the tangent disc bundle over `S^{m/2}`:
/// `h^0 ∪ h^{m/2} ∪ h̄^{m/2} ∪ h^m` with boundaries `S^{m-1}`, the unit
/// tangent bundle (a rational homology sphere), `S^{m-1}`, empty.
pub fn double_tangent(m: usize) -> OrderedHandleDecomposition {
    let s = Descriptor::sphere(m - 1);
    let qhs = Descriptor::rational_sphere(format!("ST(S^{})", m / 2), m - 1);
    OrderedHandleDecomposition::new(m, vec![])
        .with(0, declared(vec![], vec![s.clone()]))
        .with(m / 2, declared(vec![h(1)], vec![qhs]))
        .with(m / 2, declared(vec![h(2)], vec![s]))
        .with(m, declared(vec![h(3)], vec![]))
}

/// One 0-handle and `n` 1-handles, all on the one boundary component.
pub fn handlebody(n: usize) -> OrderedHandleDecomposition {
    let mut d = OrderedHandleDecomposition::new(3, vec![]);
    let mut cur = h(d.push(0, Attachment::Dim3Zero));
    for _ in 0..n {
        cur = h(d.push(1, Attachment::Dim3One { a: cur, b: cur }));
    }
    d
}
