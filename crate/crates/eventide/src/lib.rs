//! Files, synthetic streams, benchmarks and the command line around
//! [`eventide_core`].

pub mod bench;
pub mod detect;
pub mod events;
pub mod pool;
pub mod report;
pub mod stream;
pub mod synth;

pub use detect::{detect, DetectSummary};
pub use events::{final_events, read_events, EventsWriter};
pub use pool::RayonPool;
pub use report::{DetectionReport, RunManifest};
pub use stream::{parse_record, read_truth, write_stream, write_truth, StreamReader, StreamRecord};
pub use synth::{generate_stream, SyntheticSpec, Synthetic};
