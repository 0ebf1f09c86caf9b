//! Graphs of groups and diagrams of groups over free abelian, finite, and
//! free vertex groups: fundamental-group presentations, pinch reduction of
//! loop words, contraction and conversion moves, and abelianness analysis.

pub mod analysis;
pub mod format;
pub mod gog;
pub mod graph;
pub mod groups;
pub mod moves;
pub mod quotients;
pub mod words;

pub use gog::{DiagramClass, GogError, GraphOfGroups, Presentation};
pub use graph::{AbstractGraph, EdgeId, EdgeOrbit, ValidationReport, VertexId};
pub use groups::{Element, GroupDesc, GroupError, Hom, HomData, MembershipAnswer};
pub use words::{LoopWord, PinchFreeForm, Reducer, WordError};
pub use moves::{Conversion, Decomposition, MoveError, SplitShape};
pub use quotients::{InvariantFactors, QuotientOracle, Soundness};
pub use analysis::{AbelianVerdict, AnalysisError, WitnessStep};
pub use format::{parse_gog, serialize_gog, FormatError};
