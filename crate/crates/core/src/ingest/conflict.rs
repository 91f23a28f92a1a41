use chrono::{DateTime, Utc};

use super::{AnnotationSet, RawRecord};
use crate::domain::Source;

/// Comparison key for annotator answers: case- and whitespace-insensitive.
pub fn vote_key(value: &str) -> String {
    value
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// Picks the value with strictly more votes than any other. `None` on a
/// tie for first place.
fn plurality(values: &[String]) -> Option<&str> {
    let mut tally: Vec<(String, usize, &str)> = Vec::new();
    for v in values {
        let key = vote_key(v);
        match tally.iter_mut().find(|(k, _, _)| *k == key) {
            Some(entry) => entry.1 += 1,
            None => tally.push((key, 1, v.trim())),
        }
    }
    let top = tally.iter().map(|t| t.1).max()?;
    let mut leaders = tally.iter().filter(|t| t.1 == top);
    let first = leaders.next()?;
    leaders.next().is_none().then_some(first.2)
}

/// Merges annotator answers field by field. Unanimous or plurality values
/// are adopted (first spelling seen wins); exact ties leave the field empty
/// and list it in the returned review flags, which are also attached to
/// the record as `review:<field>`.
pub fn resolve_conflicts(
    set: &AnnotationSet,
    retrieved_at: DateTime<Utc>,
) -> (RawRecord, Vec<String>) {
    let mut record = RawRecord::new(
        set.street_name.trim(),
        set.city,
        Source::AnnotatedCsv,
        retrieved_at,
    );
    let mut review = Vec::new();
    for (column, values) in &set.fields {
        let Some(slot) = record.field_mut(column) else {
            continue;
        };
        match plurality(values) {
            Some(v) => *slot = Some(v.to_string()),
            None => review.push(column.clone()),
        }
    }
    record.flags = review.iter().map(|f| format!("review:{f}")).collect();
    (record, review)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::CityId;
    use chrono::TimeZone;
    use std::collections::BTreeMap;

    fn set(fields: &[(&str, &[&str])]) -> AnnotationSet {
        AnnotationSet {
            street_key: "baker street".into(),
            street_name: "Baker Street".into(),
            city: CityId::London,
            annotators: vec!["a".into(), "b".into(), "c".into()],
            fields: fields
                .iter()
                .map(|(k, vs)| (k.to_string(), vs.iter().map(|v| v.to_string()).collect()))
                .collect::<BTreeMap<_, _>>(),
        }
    }

    fn at() -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2021, 1, 1, 0, 0, 0).unwrap()
    }

    #[test]
    fn unanimity() {
        let (r, flags) = resolve_conflicts(&set(&[("gender", &["female", "female"])]), at());
        assert_eq!(r.gender.as_deref(), Some("female"));
        assert!(flags.is_empty());
    }

    #[test]
    fn majority() {
        let (r, flags) = resolve_conflicts(&set(&[("gender", &["female", "female", "male"])]), at());
        assert_eq!(r.gender.as_deref(), Some("female"));
        assert!(flags.is_empty());
    }

    #[test]
    fn two_way_tie_is_flagged() {
        let (r, flags) = resolve_conflicts(&set(&[("country", &["FR", "GB"])]), at());
        assert_eq!(r.country, None);
        assert_eq!(flags, ["country"]);
        assert_eq!(r.flags, ["review:country"]);
    }

    #[test]
    fn comparison_ignores_case_and_spacing() {
        let (r, flags) = resolve_conflicts(
            &set(&[("honoree", &["Sherlock  Holmes", "sherlock holmes ", "Mycroft"])]),
            at(),
        );
        assert_eq!(r.honoree_name.as_deref(), Some("Sherlock  Holmes"));
        assert!(flags.is_empty());
    }

    #[test]
    fn plurality_without_majority() {
        let (r, _) = resolve_conflicts(&set(&[("occupation", &["writer", "writer", "poet", "critic", "actor"])]), at());
        assert_eq!(r.occupation.as_deref(), Some("writer"));
    }
}
