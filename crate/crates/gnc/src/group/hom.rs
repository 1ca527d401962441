//! Homomorphisms between table groups: verification, kernel/image, and
//! isomorphism search by generator-image backtracking.

use std::sync::Arc;

use super::{Elem, FiniteGroup, GroupError, Subgroup};

/// A verified total homomorphism.
#[derive(Clone)]
pub struct Homomorphism {
    domain: Arc<FiniteGroup>,
    codomain: Arc<FiniteGroup>,
    map: Vec<Elem>,
}

impl std::fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Homomorphism({} -> {}, {:?})",
            self.domain.label(),
            self.codomain.label(),
            self.map
        )
    }
}

impl Homomorphism {
    /// Verifies map(x*y) = map(x)*map(y) exhaustively before construction.
    pub fn new(
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        map: Vec<Elem>,
    ) -> Result<Self, GroupError> {
        if map.len() != domain.order() {
            return Err(GroupError::MapLengthMismatch {
                len: map.len(),
                expected: domain.order(),
            });
        }
        if let Some(&v) = map.iter().find(|&&v| v >= codomain.order()) {
            return Err(GroupError::ElementOutOfRange(v, codomain.order()));
        }
        for x in domain.elements() {
            for y in domain.elements() {
                if map[domain.op(x, y)] != codomain.op(map[x], map[y]) {
                    return Err(GroupError::NotHomomorphism(x, y));
                }
            }
        }
        Ok(Homomorphism {
            domain,
            codomain,
            map,
        })
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.codomain
    }

    pub fn kernel(&self) -> Subgroup {
        let e = self.codomain.identity();
        let elements: Vec<Elem> = self
            .domain
            .elements()
            .filter(|&x| self.map[x] == e)
            .collect();
        Subgroup::new(self.domain.clone(), elements).expect("kernel is a subgroup")
    }

    pub fn image(&self) -> Subgroup {
        let mut elements: Vec<Elem> = self.map.clone();
        elements.sort_unstable();
        elements.dedup();
        Subgroup::new(self.codomain.clone(), elements).expect("image is a subgroup")
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.order() == self.codomain.order() && self.image().size() == self.codomain.order()
    }

    /// Composition other . self (apply self first).
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        debug_assert!(self.codomain.same_table(other.domain()));
        let map = self.map.iter().map(|&v| other.apply(v)).collect();
        Homomorphism {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            map,
        }
    }
}

/// Exhaustive analysis of a candidate map: homomorphism property with the
/// first violating pair, plus kernel and image when it is one.
///
/// Map entries must be valid codomain indices.
pub struct HomAnalysis {
    pub is_hom: bool,
    pub violation: Option<(Elem, Elem)>,
    pub kernel: Option<Subgroup>,
    pub image: Option<Subgroup>,
}

pub fn analyze_homomorphism(
    map: &[Elem],
    domain: &Arc<FiniteGroup>,
    codomain: &Arc<FiniteGroup>,
) -> HomAnalysis {
    assert_eq!(map.len(), domain.order(), "map must be total on the domain");
    assert!(
        map.iter().all(|&v| v < codomain.order()),
        "map entries must lie in the codomain"
    );
    for x in domain.elements() {
        for y in domain.elements() {
            if map[domain.op(x, y)] != codomain.op(map[x], map[y]) {
                return HomAnalysis {
                    is_hom: false,
                    violation: Some((x, y)),
                    kernel: None,
                    image: None,
                };
            }
        }
    }
    let hom = Homomorphism {
        domain: domain.clone(),
        codomain: codomain.clone(),
        map: map.to_vec(),
    };
    HomAnalysis {
        is_hom: true,
        violation: None,
        kernel: Some(hom.kernel()),
        image: Some(hom.image()),
    }
}

/// Greedy generating set: scan elements in index order, keeping those not in
/// the closure of the ones already kept.
fn generating_set(g: &Arc<FiniteGroup>) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut closed = Subgroup::trivial(g.clone());
    for x in g.elements() {
        if !closed.contains(x) {
            gens.push(x);
            closed = Subgroup::closure(g, &gens).expect("elements in range");
            if closed.is_whole() {
                break;
            }
        }
    }
    gens
}

/// Extends generator images to a total map by product propagation from the
/// identity. Returns None on conflict or if the images do not generate a
/// consistent assignment.
fn propagate(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[Elem],
    images: &[Elem],
) -> Option<Vec<Elem>> {
    let mut map: Vec<Option<Elem>> = vec![None; g.order()];
    map[g.identity()] = Some(h.identity());
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        let fx = map[x].unwrap();
        for (&gen, &img) in gens.iter().zip(images) {
            let y = g.op(x, gen);
            let fy = h.op(fx, img);
            match map[y] {
                None => {
                    map[y] = Some(fy);
                    frontier.push(y);
                }
                Some(existing) if existing != fy => return None,
                Some(_) => {}
            }
        }
    }
    map.into_iter().collect()
}

/// Searches for a bijective homomorphism G -> H by assigning images to a
/// generating set of G, matching element orders, in index order. Returns the
/// first isomorphism found, or None (immediately when |G| != |H|).
pub fn find_isomorphism(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>) -> Option<Homomorphism> {
    if g.order() != h.order() {
        return None;
    }
    let gens = generating_set(g);
    let orders: Vec<usize> = gens.iter().map(|&x| g.element_order(x)).collect();
    let mut images = vec![0; gens.len()];
    search(g, h, &gens, &orders, &mut images, 0)
}

fn search(
    g: &Arc<FiniteGroup>,
    h: &Arc<FiniteGroup>,
    gens: &[Elem],
    orders: &[usize],
    images: &mut [Elem],
    depth: usize,
) -> Option<Homomorphism> {
    if depth == gens.len() {
        let map = propagate(g, h, gens, images)?;
        let analysis = analyze_homomorphism(&map, g, h);
        if !analysis.is_hom {
            return None;
        }
        let hom = Homomorphism {
            domain: g.clone(),
            codomain: h.clone(),
            map,
        };
        return hom.is_bijective().then_some(hom);
    }
    for y in h.elements() {
        if h.element_order(y) != orders[depth] {
            continue;
        }
        images[depth] = y;
        if let Some(found) = search(g, h, gens, orders, images, depth + 1) {
            return Some(found);
        }
    }
    None
}
