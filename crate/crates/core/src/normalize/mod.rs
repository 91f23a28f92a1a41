//! Raw records → validated [`StreetRecord`](crate::domain::StreetRecord)s.
//!
//! The field normalizers are pure and total, and each is a fixed point on
//! its own output.

mod clean;
mod country;
mod gender;
mod occupation;
mod year;

pub use clean::{
    clean_dataset, derive_record_id, normalize_record, populated_fields, street_key, CleanReport,
    Rejection, RejectionKind,
};
pub use country::{is_iso_country_code, normalize_country};
pub use gender::normalize_gender;
pub use occupation::{default_table, map_occupation, KeywordTable, KeywordTableError, KEYWORD_TABLE};
pub use year::{parse_year, ParsedYear, YearWarning, YEAR_WINDOW};

use std::io::Write;

/// Writes the rejection report as CSV.
pub fn write_rejections_csv<W: Write>(writer: W, rejections: &[Rejection]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if rejections.is_empty() {
        w.write_record(["index", "city", "streetname", "kind", "reason", "kept_record_id"])?;
    }
    for r in rejections {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
