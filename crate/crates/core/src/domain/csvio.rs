use std::io::{Read, Write};

use super::StreetRecord;

/// Header row of the canonical dataset exchange CSV.
pub const CANONICAL_HEADER: &str = "record_id,streetname,district,denomination,honoree,gender,occupation,occupation_group,country,dob,dod,honoree_url,image_url,source,city";

pub fn write_records_csv<W: Write>(writer: W, records: &[StreetRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if records.is_empty() {
        w.write_record(CANONICAL_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records_csv<R: Read>(reader: R) -> csv::Result<Vec<StreetRecord>> {
    csv::Reader::from_reader(reader).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::record::tests::sample;
    use crate::domain::{CityId, Country, Gender, OccupationGroup, Source};
    use proptest::prelude::*;

    #[test]
    fn header_is_canonical() {
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &[sample()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CANONICAL_HEADER);

        let mut buf = Vec::new();
        write_records_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim_end(), CANONICAL_HEADER);
    }

    #[test]
    fn absent_optionals_are_empty_strings() {
        let mut r = sample();
        r.district = None;
        r.birth_year = None;
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &[r]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row = text.lines().nth(1).unwrap();
        assert!(row.starts_with("paris-0001,Rue Victor Hugo,,1885,"));
    }

    fn text() -> impl Strategy<Value = String> {
        "[A-Za-zéäß' ,\"\n-]{0,12}[A-Za-z]"
    }

    fn opt_text() -> impl Strategy<Value = Option<String>> {
        proptest::option::of(text())
    }

    prop_compose! {
        fn record()(
            record_id in "[a-z]{1,8}-[0-9a-f]{4}",
            street_name in text(),
            district in opt_text(),
            denomination_year in proptest::option::of(1000i32..2020),
            honoree_name in text(),
            gender in proptest::sample::select(Gender::ALL),
            occupation_raw in "[a-z ,]{0,10}",
            occupation_group in proptest::sample::select(OccupationGroup::ALL),
            country in proptest::option::of("[A-Z]{2}"),
            birth_year in proptest::option::of(1000i32..1900),
            death_year in proptest::option::of(1900i32..2020),
            honoree_url in opt_text(),
            image_url in opt_text(),
            source in proptest::sample::select(Source::ALL),
            city in proptest::sample::select(CityId::ALL),
        ) -> StreetRecord {
            StreetRecord {
                record_id, street_name, district, denomination_year, honoree_name, gender,
                occupation_raw, occupation_group,
                country: country.map_or(Country::Unknown, |c| Country::from_code(&c).unwrap()),
                birth_year, death_year, honoree_url, image_url, source, city,
            }
        }
    }

    proptest! {
        #[test]
        fn csv_round_trip(records in proptest::collection::vec(record(), 0..8)) {
            let mut buf = Vec::new();
            write_records_csv(&mut buf, &records).unwrap();
            let back = read_records_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(back, records);
        }
    }
}
