//! Graph invariants: a fixed registry of 44 boolean and numeric invariants,
//! each computed exactly under a cancellable [`Budget`].

mod blocks;
pub mod connectivity;
pub mod cycles;
mod flow;
pub mod genus;
pub mod hamiltonian;
pub mod matching;
pub mod npo;
pub mod planarity;
pub mod spectral;
pub mod structure;
pub mod treewidth;
mod value;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Interrupted};
use crate::canonical;
use crate::graph::Graph;

pub use blocks::{blocks, is_biconnected};
pub use value::{InvariantValue, ParseValueError, REAL_DIGITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Boolean,
    Integer,
    Real,
}

impl Kind {
    pub fn is_numeric(self) -> bool {
        self != Kind::Boolean
    }
}

macro_rules! registry {
    ($( $variant:ident, $slug:literal, $name:literal, $kind:ident, $def:literal; )*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum InvariantId {
            $( $variant, )*
        }

        impl InvariantId {
            pub const ALL: &'static [InvariantId] = &[ $( InvariantId::$variant, )* ];

            /// Stable snake_case identifier used in files and on the wire.
            pub fn slug(self) -> &'static str {
                match self { $( InvariantId::$variant => $slug, )* }
            }

            pub fn name(self) -> &'static str {
                match self { $( InvariantId::$variant => $name, )* }
            }

            pub fn kind(self) -> Kind {
                match self { $( InvariantId::$variant => Kind::$kind, )* }
            }

            pub fn definition(self) -> &'static str {
                match self { $( InvariantId::$variant => $def, )* }
            }
        }
    };
}

registry! {
    Acyclic, "acyclic", "Acyclic", Boolean, "The graph contains no cycle.";
    Bipartite, "bipartite", "Bipartite", Boolean, "The vertices admit a proper 2-coloring.";
    ClawFree, "claw_free", "Claw-Free", Boolean, "No induced subgraph is isomorphic to K1,3.";
    Connected, "connected", "Connected", Boolean, "Every pair of vertices is joined by a path. K1 is connected.";
    Eulerian, "eulerian", "Eulerian", Boolean, "All degrees are even and the edges lie in one component. K1 is Eulerian.";
    Hamiltonian, "hamiltonian", "Hamiltonian", Boolean, "Some cycle passes through every vertex. K1 and K2 are not Hamiltonian.";
    Hypohamiltonian, "hypohamiltonian", "Hypohamiltonian", Boolean, "Not Hamiltonian, but every vertex-deleted subgraph is Hamiltonian.";
    Hypotraceable, "hypotraceable", "Hypotraceable", Boolean, "Connected and not traceable, but every vertex-deleted subgraph is traceable.";
    Planar, "planar", "Planar", Boolean, "The graph embeds in the plane without crossings.";
    Regular, "regular", "Regular", Boolean, "Minimum degree equals maximum degree.";
    Traceable, "traceable", "Traceable", Boolean, "Some path passes through every vertex. K1 is traceable.";
    AlgebraicConnectivity, "algebraic_connectivity", "Algebraic Connectivity", Real, "Second smallest Laplacian eigenvalue; 0 for K1.";
    AverageDegree, "average_degree", "Average Degree", Real, "2m/n.";
    ChromaticIndex, "chromatic_index", "Chromatic Index", Integer, "Least number of colors in a proper edge coloring.";
    ChromaticNumber, "chromatic_number", "Chromatic Number", Integer, "Least number of colors in a proper vertex coloring.";
    Circumference, "circumference", "Circumference", Integer, "Length of a longest cycle; 0 if the graph is acyclic.";
    CliqueNumber, "clique_number", "Clique Number", Integer, "Order of a largest complete subgraph.";
    Density, "density", "Density", Real, "m divided by n(n-1)/2; 0 for K1.";
    Diameter, "diameter", "Diameter", Integer, "Largest distance between two vertices; -1 if the graph is disconnected.";
    DominationNumber, "domination_number", "Domination Number", Integer, "Order of a smallest set whose closed neighborhood is every vertex.";
    EdgeConnectivity, "edge_connectivity", "Edge Connectivity", Integer, "Fewest edges whose removal disconnects the graph; 0 if disconnected or K1.";
    Genus, "genus", "Genus", Integer, "Least genus of an orientable surface the graph embeds in; summed over components.";
    Girth, "girth", "Girth", Integer, "Length of a shortest cycle; 0 if the graph is acyclic.";
    GroupSize, "group_size", "Group Size", Integer, "Order of the automorphism group.";
    IndependenceNumber, "independence_number", "Independence Number", Integer, "Order of a largest set of pairwise non-adjacent vertices.";
    Index, "index", "Index", Real, "Largest eigenvalue of the adjacency matrix.";
    LaplacianLargestEigenvalue, "laplacian_largest_eigenvalue", "Laplacian Largest Eigenvalue", Real, "Largest eigenvalue of the Laplacian matrix.";
    LongestInducedCycle, "longest_induced_cycle", "Longest Induced Cycle", Integer, "Length of a longest induced cycle; 0 if the graph is acyclic.";
    LongestInducedPath, "longest_induced_path", "Longest Induced Path", Integer, "Number of edges of a longest induced path.";
    MatchingNumber, "matching_number", "Matching Number", Integer, "Size of a largest set of pairwise disjoint edges.";
    MaximumDegree, "maximum_degree", "Maximum Degree", Integer, "Largest vertex degree.";
    MinimumDegree, "minimum_degree", "Minimum Degree", Integer, "Smallest vertex degree.";
    NumberOfComponents, "number_of_components", "Number of Components", Integer, "Number of connected components.";
    NumberOfEdges, "number_of_edges", "Number of Edges", Integer, "m.";
    NumberOfSpanningTrees, "number_of_spanning_trees", "Number of Spanning Trees", Integer, "Number of spanning trees; 0 if disconnected, 1 for K1.";
    NumberOfTriangles, "number_of_triangles", "Number of Triangles", Integer, "Number of subgraphs isomorphic to K3.";
    NumberOfVertexOrbits, "number_of_vertex_orbits", "Number of Vertex Orbits", Integer, "Number of orbits of the automorphism group on the vertices.";
    NumberOfVertices, "number_of_vertices", "Number of Vertices", Integer, "n.";
    NumberOfZeroEigenvalues, "number_of_zero_eigenvalues", "Number of Zero Eigenvalues", Integer, "Multiplicity of 0 in the adjacency spectrum.";
    Radius, "radius", "Radius", Integer, "Smallest eccentricity; -1 if the graph is disconnected.";
    SecondLargestEigenvalue, "second_largest_eigenvalue", "Second Largest Eigenvalue", Real, "Second largest adjacency eigenvalue, with multiplicity; 0 for K1.";
    SmallestEigenvalue, "smallest_eigenvalue", "Smallest Eigenvalue", Real, "Smallest adjacency eigenvalue.";
    Treewidth, "treewidth", "Treewidth", Integer, "Least width of a tree decomposition.";
    VertexConnectivity, "vertex_connectivity", "Vertex Connectivity", Integer, "Fewest vertices whose removal disconnects the graph; n-1 for complete graphs, 0 if disconnected.";
}

impl InvariantId {
    /// Looks up by slug or by display name, ignoring case.
    pub fn lookup(key: &str) -> Option<InvariantId> {
        let key = key.trim();
        InvariantId::ALL.iter().copied().find(|id| {
            id.slug().eq_ignore_ascii_case(key)
                || id.name().eq_ignore_ascii_case(key)
                || id.slug().replace('_', "-").eq_ignore_ascii_case(key)
        })
    }

    /// Coerces a parsed value into this invariant's kind.
    pub fn coerce(self, v: InvariantValue) -> Option<InvariantValue> {
        match (self.kind(), v) {
            (Kind::Boolean, v @ InvariantValue::Bool(_)) => Some(v),
            (Kind::Integer, v @ InvariantValue::Integer(_)) => Some(v),
            (Kind::Real, InvariantValue::Real(x)) => Some(InvariantValue::real(x)),
            (Kind::Real, v @ InvariantValue::Integer(_)) => v.as_f64().map(InvariantValue::real),
            _ => None,
        }
    }

    /// Parses a textual value for this invariant.
    pub fn parse_value(self, text: &str) -> Result<InvariantValue, ParseValueError> {
        text.parse::<InvariantValue>()
            .ok()
            .and_then(|v| self.coerce(v))
            .ok_or_else(|| ParseValueError(text.to_string()))
    }
}

impl fmt::Display for InvariantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown invariant {0:?}")]
pub struct UnknownInvariant(pub String);

impl FromStr for InvariantId {
    type Err = UnknownInvariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        InvariantId::lookup(s).ok_or_else(|| UnknownInvariant(s.to_string()))
    }
}

impl Serialize for InvariantId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.slug())
    }
}

impl<'de> Deserialize<'de> for InvariantId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantInfo {
    pub id: InvariantId,
    pub kind: Kind,
    pub name: &'static str,
    pub definition: &'static str,
}

pub fn list_invariants() -> Vec<InvariantInfo> {
    InvariantId::ALL
        .iter()
        .map(|&id| InvariantInfo { id, kind: id.kind(), name: id.name(), definition: id.definition() })
        .collect()
}

fn int(v: usize) -> InvariantValue {
    InvariantValue::int(v)
}

/// Computes one invariant. The computation polls `budget` and returns
/// [`Interrupted`] once it trips.
pub fn compute(id: InvariantId, g: &Graph, budget: &Budget) -> Result<InvariantValue, Interrupted> {
    use InvariantId::*;
    budget.check()?;
    let n = g.order();
    let m = g.size();
    Ok(match id {
        NumberOfVertices => int(n),
        NumberOfEdges => int(m),
        MinimumDegree => int(g.min_degree()),
        MaximumDegree => int(g.max_degree()),
        AverageDegree => InvariantValue::real(2.0 * m as f64 / n as f64),
        Density => InvariantValue::real(if n < 2 { 0.0 } else { m as f64 / (n * (n - 1) / 2) as f64 }),
        Regular => InvariantValue::Bool(g.min_degree() == g.max_degree()),

        Connected => InvariantValue::Bool(g.is_connected()),
        NumberOfComponents => int(g.components().len()),
        Diameter => InvariantValue::int(connectivity::diameter(g, budget)?),
        Radius => InvariantValue::int(connectivity::radius(g, budget)?),
        VertexConnectivity => int(connectivity::vertex_connectivity(g, budget)?),
        EdgeConnectivity => int(connectivity::edge_connectivity(g, budget)?),

        Girth => int(cycles::girth(g, budget)?),
        Acyclic => InvariantValue::Bool(m + g.components().len() == n),
        NumberOfTriangles => InvariantValue::int(cycles::triangles(g)),
        Circumference => int(cycles::circumference(g, budget)?),
        LongestInducedCycle => int(cycles::longest_induced_cycle(g, budget)?),
        LongestInducedPath => int(cycles::longest_induced_path(g, budget)?),

        CliqueNumber => int(npo::clique_number(g, budget)?),
        IndependenceNumber => int(npo::independence_number(g, budget)?),
        DominationNumber => int(npo::domination_number(g, budget)?),
        ChromaticNumber => int(npo::chromatic_number(g, budget)?),
        ChromaticIndex => int(npo::chromatic_index(g, budget)?),
        MatchingNumber => int(matching::matching_number(g)),

        Index => InvariantValue::real(spectral::spectra(g).index),
        SecondLargestEigenvalue => InvariantValue::real(spectral::spectra(g).second_largest),
        SmallestEigenvalue => InvariantValue::real(spectral::spectra(g).smallest),
        NumberOfZeroEigenvalues => int(spectral::spectra(g).zero_count),
        LaplacianLargestEigenvalue => InvariantValue::real(spectral::spectra(g).laplacian_largest),
        AlgebraicConnectivity => InvariantValue::real(spectral::spectra(g).algebraic_connectivity),
        NumberOfSpanningTrees => InvariantValue::Integer(spectral::spanning_trees(g, budget)?),

        Eulerian => InvariantValue::Bool(hamiltonian::is_eulerian(g)),
        Hamiltonian => InvariantValue::Bool(hamiltonian::is_hamiltonian(g, budget)?),
        Traceable => InvariantValue::Bool(hamiltonian::is_traceable(g, budget)?),
        Hypohamiltonian => InvariantValue::Bool(hamiltonian::is_hypohamiltonian(g, budget)?),
        Hypotraceable => InvariantValue::Bool(hamiltonian::is_hypotraceable(g, budget)?),

        Bipartite => InvariantValue::Bool(structure::is_bipartite(g)),
        ClawFree => InvariantValue::Bool(structure::is_claw_free(g)),
        Planar => InvariantValue::Bool(planarity::is_planar(g, budget)?),
        Genus => int(genus::genus(g, budget)?),
        Treewidth => int(treewidth::treewidth(g, budget)?),

        GroupSize => InvariantValue::Integer(canonical::analyze_within(g, budget)?.automorphisms.group_size.into()),
        NumberOfVertexOrbits => int(canonical::analyze_within(g, budget)?.automorphisms.orbit_count()),
    })
}

pub type Values = Vec<(InvariantId, InvariantValue)>;

fn group(ids: &[InvariantId], g: &Graph, budget: &Budget) -> Result<Values, Interrupted> {
    ids.iter().map(|&id| compute(id, g, budget).map(|v| (id, v))).collect()
}

pub fn degree_and_size_invariants(g: &Graph) -> Values {
    use InvariantId::*;
    group(
        &[NumberOfVertices, NumberOfEdges, MinimumDegree, MaximumDegree, AverageDegree, Density, Regular],
        g,
        &Budget::unlimited(),
    )
    .expect("unlimited budget never trips")
}

pub fn connectivity_invariants(g: &Graph, budget: &Budget) -> Result<Values, Interrupted> {
    use InvariantId::*;
    group(&[Connected, NumberOfComponents, Diameter, Radius, VertexConnectivity, EdgeConnectivity], g, budget)
}

pub fn cycle_invariants(g: &Graph, budget: &Budget) -> Result<Values, Interrupted> {
    use InvariantId::*;
    group(
        &[Girth, Acyclic, NumberOfTriangles, Circumference, LongestInducedCycle, LongestInducedPath],
        g,
        budget,
    )
}

pub fn npo_invariants(g: &Graph, budget: &Budget) -> Result<Values, Interrupted> {
    use InvariantId::*;
    group(
        &[CliqueNumber, IndependenceNumber, DominationNumber, ChromaticNumber, ChromaticIndex, MatchingNumber],
        g,
        budget,
    )
}

pub fn spectral_invariants(g: &Graph, budget: &Budget) -> Result<Values, Interrupted> {
    use InvariantId::*;
    group(
        &[
            Index,
            SecondLargestEigenvalue,
            SmallestEigenvalue,
            NumberOfZeroEigenvalues,
            LaplacianLargestEigenvalue,
            AlgebraicConnectivity,
            NumberOfSpanningTrees,
        ],
        g,
        budget,
    )
}

pub fn hamiltonicity_invariants(g: &Graph, budget: &Budget) -> Result<Values, Interrupted> {
    use InvariantId::*;
    group(&[Eulerian, Hamiltonian, Traceable, Hypohamiltonian, Hypotraceable], g, budget)
}

pub fn structure_invariants(g: &Graph, budget: &Budget) -> Result<Values, Interrupted> {
    use InvariantId::*;
    group(&[Bipartite, ClawFree, Planar, Genus, Treewidth], g, budget)
}

pub fn symmetry_invariants(g: &Graph, budget: &Budget) -> Result<Values, Interrupted> {
    let a = canonical::analyze_within(g, budget)?;
    Ok(vec![
        (InvariantId::GroupSize, InvariantValue::Integer(a.automorphisms.group_size.clone().into())),
        (InvariantId::NumberOfVertexOrbits, int(a.automorphisms.orbit_count())),
    ])
}
