use super::cell::BerRecord;
use super::sweep::SweepSpec;
use crate::error::{Error, Result};
use std::io::Write;

/// CSV writer for [`BerRecord`] rows.
///
/// The file opens with `#` metadata lines describing the conventions, then a
/// header row and one record per line. Floats use the shortest round-trip
/// representation with `.` as decimal separator; absent values are empty.
pub struct RecordWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(mut out: W, spec: &SweepSpec) -> Result<Self> {
        writeln!(out, "# sefdm ber sweep")?;
        writeln!(out, "# constellation: {}; bit labeling: gray", spec.constellation)?;
        writeln!(out, "# snr_db: Es/N0 per subcarrier symbol (Es = 1, sigma2 = 10^(-snr_db/10)); ebn0_db = snr_db - 10 log10(bits per symbol)")?;
        writeln!(
            out,
            "# iterative: lambda={} d_start={} d_end={} schedule={:?} mapping={:?} start={:?} freeze={}",
            spec.lambda, spec.d_start, spec.d_end, spec.schedule, spec.mapping, spec.start, spec.freeze_decided
        )?;
        writeln!(
            out,
            "# sd epsilon: {}; min_bits={} min_bit_errors={} base_seed={}",
            spec.sd_epsilon.map_or("sigma2".to_string(), |e| e.to_string()),
            spec.min_bits,
            spec.min_bit_errors,
            spec.base_seed
        )?;
        Ok(Self {
            inner: csv::WriterBuilder::new().has_headers(true).from_writer(out),
        })
    }

    pub fn write(&mut self, record: &BerRecord) -> Result<()> {
        self.inner.serialize(record)?;
        self.inner.flush()?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush()?;
        self.inner
            .into_inner()
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?
            .flush()?;
        Ok(())
    }
}
