//! Special fibres of minimal regular models as weighted intersection graphs.
//!
//! At a prime of good reduction the fibre is a single smooth component. After
//! a ramified quadratic twist it becomes a star: a rational centre of
//! multiplicity 2 and self-intersection `-(g+1)`, with `2g+2` reduced leaves
//! of self-intersection `-2`, one for each branch point of `x`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::FactorShape;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub name: String,
    #[serde(rename = "mult")]
    pub multiplicity: u32,
    #[serde(rename = "self_int")]
    pub self_intersection: i64,
    pub genus: u32,
    /// Size of the Frobenius orbit; 1 means defined over F_p.
    #[serde(rename = "orbit")]
    pub field_of_definition_degree: u32,
}

impl Component {
    fn new(name: impl Into<String>, multiplicity: u32, self_intersection: i64, genus: u32) -> Self {
        Component {
            name: name.into(),
            multiplicity,
            self_intersection,
            genus,
            field_of_definition_degree: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberGraph {
    components: Vec<Component>,
    pairings: Vec<Vec<i64>>,
}

impl FiberGraph {
    /// Builds a graph from components and their intersection matrix. The
    /// matrix must be symmetric with nonnegative off-diagonal entries and the
    /// self-intersections on the diagonal.
    pub fn new(components: Vec<Component>, pairings: Vec<Vec<i64>>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::NotAFiber("no components".into()));
        }
        if pairings.len() != n || pairings.iter().any(|row| row.len() != n) {
            return Err(Error::NotAFiber("pairing matrix has the wrong shape".into()));
        }
        for (i, c) in components.iter().enumerate() {
            if c.multiplicity == 0 || c.field_of_definition_degree == 0 {
                return Err(Error::NotAFiber(format!("{}: zero multiplicity or orbit", c.name)));
            }
            if pairings[i][i] != c.self_intersection {
                return Err(Error::NotAFiber(format!("{}: diagonal disagrees", c.name)));
            }
            for (j, &v) in pairings[i].iter().enumerate() {
                if v != pairings[j][i] {
                    return Err(Error::NotAFiber("pairing matrix is not symmetric".into()));
                }
                if i != j && v < 0 {
                    return Err(Error::NotAFiber("negative intersection of distinct components".into()));
                }
            }
        }
        Ok(FiberGraph { components, pairings })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn pairings(&self) -> &[Vec<i64>] {
        &self.pairings
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn multiplicities(&self) -> Vec<i64> {
        self.components.iter().map(|c| c.multiplicity as i64).collect()
    }

    /// `F · C_i` for each component, where `F = Σ m_j C_j`.
    pub fn fiber_products(&self) -> Vec<i64> {
        let m = self.multiplicities();
        self.pairings
            .iter()
            .map(|row| row.iter().zip(&m).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn satisfies_fiber_identity(&self) -> bool {
        self.fiber_products().iter().all(|&x| x == 0)
    }

    /// Exact test that the intersection matrix is negative semidefinite with
    /// radical spanned by the multiplicity vector.
    ///
    /// Given `M m = 0`, this holds iff deleting one component leaves a
    /// negative definite matrix, checked through the leading principal
    /// minors of its negation.
    pub fn has_fiber_radical(&self) -> bool {
        if !self.satisfies_fiber_identity() {
            return false;
        }
        let n = self.len();
        let keep: Vec<usize> = (1..n).collect();
        let minor: Vec<Vec<i64>> = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| -self.pairings[i][j]).collect())
            .collect();
        leading_minors_positive(minor)
    }

    /// No genus-0 component of self-intersection -1.
    pub fn check_minimality(&self) -> bool {
        !self
            .components
            .iter()
            .any(|c| c.genus == 0 && c.self_intersection == -1)
    }

    /// `p_a` of the whole fibre from `2 p_a - 2 = Σ m_i (2 g_i - 2 - C_i^2)`,
    /// which is adjunction with `F^2 = 0`.
    pub fn arithmetic_genus(&self) -> Result<i64> {
        if !self.satisfies_fiber_identity() {
            return Err(Error::NotAFiber("F . C_i != 0 for some component".into()));
        }
        let canonical_degree: i64 = self
            .components
            .iter()
            .map(|c| c.multiplicity as i64 * (2 * c.genus as i64 - 2 - c.self_intersection))
            .sum();
        if canonical_degree % 2 != 0 {
            return Err(Error::NotAFiber("odd canonical degree".into()));
        }
        Ok(canonical_degree / 2 + 1)
    }

    /// Annotates the leaves of a twisted fibre with Frobenius orbit sizes:
    /// each irreducible factor of degree `k` of `f mod p` contributes `k`
    /// leaves in one orbit, and the leaf over infinity (odd `deg f mod p`) is
    /// rational.
    pub fn descend_components(&self, shape: &FactorShape, odd_degree: bool) -> Result<Self> {
        let leaves = self.len() - 1;
        let genus = self.star_genus().ok_or(Error::UnknownType)?;
        let actual = shape.total_degree() + usize::from(odd_degree);
        if actual != leaves {
            return Err(Error::ShapeMismatch {
                expected: 2 * genus as usize + 2,
                actual,
            });
        }
        let mut orbits: Vec<u32> = shape
            .degrees()
            .iter()
            .flat_map(|&k| std::iter::repeat_n(k, k as usize))
            .collect();
        if odd_degree {
            orbits.push(1);
        }
        let mut out = self.clone();
        for (leaf, orbit) in out.components[1..].iter_mut().zip(orbits) {
            leaf.field_of_definition_degree = orbit;
        }
        Ok(out)
    }

    /// Whether some reduced component is defined over F_p. A Q_p-point
    /// reduces to such a component, so `false` rules points out.
    pub fn rational_smooth_locus_nonempty(&self) -> bool {
        self.components
            .iter()
            .any(|c| c.multiplicity == 1 && c.field_of_definition_degree == 1)
    }

    fn is_good(&self) -> Option<u32> {
        match self.components.as_slice() {
            [c] if c.multiplicity == 1 && c.self_intersection == 0 && c.genus >= 1 => Some(c.genus),
            _ => None,
        }
    }

    /// The genus `g` if this is the twisted star with `2g + 2` leaves.
    fn star_genus(&self) -> Option<u32> {
        let leaves = self.len().checked_sub(1)?;
        if leaves < 4 || leaves % 2 != 0 {
            return None;
        }
        let g = (leaves as u32 - 2) / 2;
        let model = twist_fiber_model(g).ok()?;
        let same_components = self.components.iter().zip(&model.components).all(|(a, b)| {
            (a.multiplicity, a.self_intersection, a.genus)
                == (b.multiplicity, b.self_intersection, b.genus)
        });
        (same_components && self.pairings == model.pairings).then_some(g)
    }

    /// `"good"`, `"I0*"` (genus 1), `"[I*_{0-0-0}]"` (genus 2), or
    /// `"star(2g+2)"` beyond.
    pub fn type_label(&self) -> Result<String> {
        if self.is_good().is_some() {
            return Ok("good".into());
        }
        match self.star_genus() {
            Some(1) => Ok("I0*".into()),
            Some(2) => Ok("[I*_{0-0-0}]".into()),
            Some(g) => Ok(format!("star({})", 2 * g + 2)),
            None => Err(Error::UnknownType),
        }
    }

    /// Graphviz rendering; components drawn as `name (mult)`, non-rational
    /// ones dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph fiber {\n");
        for (i, c) in self.components.iter().enumerate() {
            let style = if c.field_of_definition_degree == 1 { "solid" } else { "dashed" };
            let _ = writeln!(
                out,
                "  c{i} [label=\"{} ({})\\nC^2={} g={} orbit={}\", style={style}];",
                c.name, c.multiplicity, c.self_intersection, c.genus, c.field_of_definition_degree
            );
        }
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let k = self.pairings[i][j];
                if k > 0 {
                    let label = if k > 1 { format!(" [label={k}]") } else { String::new() };
                    let _ = writeln!(out, "  c{i} -- c{j}{label};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Sylvester's criterion, with the leading minors read off as Bareiss pivots.
/// Runs in checked `i128` and redoes the work in `BigInt` on overflow.
fn leading_minors_positive(a: Vec<Vec<i64>>) -> bool {
    let small: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    match bareiss_pivots_positive(small, |x, y, z, w, prev| {
        x.checked_mul(*y)?.checked_sub(z.checked_mul(*w)?)?.checked_div(*prev)
    }) {
        Some(ok) => ok,
        None => {
            let big = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            bareiss_pivots_positive(big, |x, y, z, w, prev| Some((x * y - z * w) / prev))
                .expect("BigInt arithmetic does not overflow")
        }
    }
}

fn bareiss_pivots_positive<T>(
    mut a: Vec<Vec<T>>,
    step: impl Fn(&T, &T, &T, &T, &T) -> Option<T>,
) -> Option<bool>
where
    T: Clone + Signed,
{
    let n = a.len();
    let mut prev = T::one();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return Some(false);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                if a[i][j].is_zero() && (a[i][k].is_zero() || a[k][j].is_zero()) {
                    continue;
                }
                a[i][j] = step(&a[i][j], &a[k][k], &a[i][k], &a[k][j], &prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    Some(true)
}

/// The special fibre at a prime of good reduction: one smooth component of
/// genus `g`.
pub fn good_fiber(genus: u32) -> Result<FiberGraph> {
    if genus < 1 {
        return Err(Error::GenusTooSmall);
    }
    FiberGraph::new(vec![Component::new("C", 1, 0, genus)], vec![vec![0]])
}

/// The fibre of the twist by a uniformiser at a prime of good reduction.
pub fn twist_fiber_model(genus: u32) -> Result<FiberGraph> {
    if genus < 1 {
        return Err(Error::GenusTooSmall);
    }
    let leaves = 2 * genus as usize + 2;
    let n = leaves + 1;
    let mut components = vec![Component::new("Theta", 2, -(genus as i64) - 1, 0)];
    components.extend((1..=leaves).map(|i| Component::new(format!("Gamma_{i}"), 1, -2, 0)));
    let mut pairings = vec![vec![0i64; n]; n];
    for (i, c) in components.iter().enumerate() {
        pairings[i][i] = c.self_intersection;
    }
    for row in pairings.iter_mut().skip(1) {
        row[0] = 1;
    }
    pairings[0][1..].fill(1);
    FiberGraph::new(components, pairings)
}
