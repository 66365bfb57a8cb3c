//! Lightlike submanifolds: frames, Gauss–Weingarten splittings and the
//! relations between the objects induced by ∇̄, ∇̄* and D̃.

pub mod frame;
pub mod point;
pub mod relations;

pub use frame::{plan, plan_at, radical_rank, reference_point, Block, Frame, FramePlan, Gauge, Immersion};
pub use point::{FieldJet, PointContext, Split, TField};
pub use relations::check_frames;
