//! Benchmarks live in `benches/`; run them with `cargo bench -p arrfq-bench`.

use arrfq_core::io::{ingest_appendix, APPENDIX_TEX};
use arrfq_core::Arrangement;

/// The bundled appendix arrangements, used as benchmark inputs.
pub fn appendix_arrangements() -> Vec<Arrangement> {
    ingest_appendix(APPENDIX_TEX)
        .expect("bundled appendix parses")
        .into_iter()
        .map(|e| e.arrangement)
        .collect()
}
