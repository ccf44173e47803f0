//! Markov equivalence, essential graphs and strong edges for chain graphs
//! under the Andersson-Madigan-Perlman (AMP) interpretation, with causal
//! effect bounds for linear-Gaussian models.
//!
//! The usual pipeline starts from a [`ChainGraph`], builds its essential
//! graph with [`essential_graph`], labels the strong edges with
//! [`label_strong`], and then enumerates adjusting sets for a target node with
//! [`enumerate_adjusting_sets`]. Brute-force references for every step live
//! in [`equivalence`] and [`oracle`].
//!
//! ```
//! use amp_chain::{io::parse_compact, label_graph};
//!
//! let g = parse_compact("A->C B->C C->D").unwrap();
//! let l = label_graph(&g).unwrap();
//! assert_eq!(l.strong.describe(g.names()), ["C->D"]);
//! ```

pub mod causal;
pub mod equivalence;
pub mod error;
pub mod essential;
pub mod gaussian;
pub mod generate;
pub mod graph;
pub mod io;
pub mod nodeset;
pub mod oracle;
pub mod separation;
pub mod strong;
pub mod transform;

pub use causal::{adjusting_set, enumerate_adjusting_sets, AdjustMode, AdjustingSet};
pub use equivalence::{enumerate_class, equivalent, EquivalenceClass, StrongEdgeSet};
pub use error::{Error, Result};
pub use essential::{essential_graph, EssentialGraph, MarkedGraph, SeparatorTable};
pub use graph::{ChainGraph, Edge, EdgeKind, GraphBuilder};
pub use nodeset::NodeSet;
pub use separation::{separated, SeparationQuery};
pub use strong::{label_graph, label_strong, StrongLabeling};
