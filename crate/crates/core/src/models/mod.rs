//! Feasible segments and the colouring rules built on them.
//!
//! Edge identity: the edge from `u` to `u + e_axis` is stored in slot
//! `u·d + axis`, with `u` the lesser endpoint under periodic ordering.
//!
//! On a torus a line holding a single occupied site `v` yields one
//! full-cycle segment from `v` back to itself. Under the one-choice rule
//! either direction along that axis selects the whole cycle. Lines without
//! occupied sites carry no segment.

mod coloring;
mod edges;
mod segments;

pub use coloring::{
    corrupted_compass_turquoise, independent_blue, mixed_percolation, one_choice_blue, one_choice_blue_from,
    restrict_independent_to_occupied_pairs, ChoiceAssignment,
};
pub use edges::{BlueEdgeSet, ModelParams, ModelTag, Seeds};
pub use segments::{feasible_segments, Segment, SegmentSet};
