//! Per-generation run trace: one tab-separated line per generation with the
//! generation index, best fitness, mean fitness, training CCR of the best
//! individual and evaluations so far.

use std::io::Write;

use punn_core::engine::GenerationStats;

pub fn trace_line(s: &GenerationStats) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}",
        s.generation, s.best_fitness, s.mean_fitness, s.best_ccr, s.evaluations
    )
}

/// Writes trace lines, keeping the first I/O error instead of panicking
/// inside the engine's observer callback.
pub struct TraceWriter<W: Write> {
    out: W,
    error: Option<std::io::Error>,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        TraceWriter { out, error: None }
    }

    pub fn record(&mut self, s: &GenerationStats) {
        if self.error.is_none() {
            if let Err(e) = writeln!(self.out, "{}", trace_line(s)) {
                self.error = Some(e);
            }
        }
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}
