//! Street pages of a structured history wiki: an infobox table of
//! labeled `<th>`/`<td>` rows, German or English labels.

use chrono::{DateTime, Utc};
use scraper::{ElementRef, Html, Selector};

use super::{IngestError, RawRecord};
use crate::domain::{CityId, Source};

pub struct PageContext<'a> {
    pub city: CityId,
    pub retrieved_at: DateTime<Utc>,
    /// Page URL; relative links in the page resolve against it.
    pub url: Option<&'a str>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Street,
    Column(&'static str),
}

/// Lowercased infobox label → target field.
const LABELS: &[(&str, Slot)] = &[
    ("straßenname", Slot::Street),
    ("strassenname", Slot::Street),
    ("name", Slot::Street),
    ("street", Slot::Street),
    ("street name", Slot::Street),
    ("bezirk", Slot::Column("district")),
    ("district", Slot::Column("district")),
    ("benennung", Slot::Column("denomination")),
    ("benennungsdatum", Slot::Column("denomination")),
    ("datum von", Slot::Column("denomination")),
    ("named", Slot::Column("denomination")),
    ("naming date", Slot::Column("denomination")),
    ("denomination", Slot::Column("denomination")),
    ("benannt nach", Slot::Column("honoree")),
    ("named after", Slot::Column("honoree")),
    ("honoree", Slot::Column("honoree")),
    ("geschlecht", Slot::Column("gender")),
    ("gender", Slot::Column("gender")),
    ("beruf", Slot::Column("occupation")),
    ("occupation", Slot::Column("occupation")),
    ("profession", Slot::Column("occupation")),
    ("herkunft", Slot::Column("country")),
    ("nationalität", Slot::Column("country")),
    ("land", Slot::Column("country")),
    ("country", Slot::Column("country")),
    ("country of origin", Slot::Column("country")),
    ("nationality", Slot::Column("country")),
    ("geburtsdatum", Slot::Column("dob")),
    ("geboren", Slot::Column("dob")),
    ("date of birth", Slot::Column("dob")),
    ("born", Slot::Column("dob")),
    ("sterbedatum", Slot::Column("dod")),
    ("gestorben", Slot::Column("dod")),
    ("date of death", Slot::Column("dod")),
    ("died", Slot::Column("dod")),
    ("bild", Slot::Column("image_url")),
    ("image", Slot::Column("image_url")),
];

fn selector(s: &str) -> Selector {
    Selector::parse(s).expect("static selector")
}

fn text_of(el: ElementRef<'_>) -> String {
    el.text().collect::<Vec<_>>().join(" ").split_whitespace().collect::<Vec<_>>().join(" ")
}

fn resolve(href: &str, base: Option<&str>) -> String {
    match base.and_then(|b| url::Url::parse(b).ok()) {
        Some(base) => base.join(href).map_or_else(|_| href.to_string(), |u| u.to_string()),
        None => href.to_string(),
    }
}

fn slot_for(label: &str) -> Option<Slot> {
    let label = label.trim().trim_end_matches(':').trim().to_lowercase();
    LABELS.iter().find(|(l, _)| *l == label).map(|(_, s)| *s)
}

/// Extracts a raw record from a street page's infobox. Unrecognized rows
/// are ignored; missing rows leave fields absent.
pub fn parse_wiki_street_page(html: &str, ctx: &PageContext<'_>) -> Result<RawRecord, IngestError> {
    let doc = Html::parse_document(html);
    let row_sel = selector("tr");
    let th_sel = selector("th");
    let td_sel = selector("td");
    let a_sel = selector("a[href]");
    let img_sel = selector("img[src]");

    let infobox = doc
        .select(&selector("table"))
        .find(|t| {
            t.value()
                .attr("class")
                .is_some_and(|c| c.split_whitespace().any(|c| c.starts_with("infobox")))
        })
        .ok_or_else(|| IngestError::NotAStreetPage("no infobox table".into()))?;

    let mut street = None;
    let mut record = RawRecord::new("", ctx.city, Source::Wikihistory, ctx.retrieved_at);
    let mut recognized = 0;
    for row in infobox.select(&row_sel) {
        let (Some(th), Some(td)) = (row.select(&th_sel).next(), row.select(&td_sel).next()) else {
            continue;
        };
        let Some(slot) = slot_for(&text_of(th)) else {
            continue;
        };
        recognized += 1;
        match slot {
            Slot::Street => street = Some(text_of(td)).filter(|s| !s.is_empty()),
            Slot::Column("image_url") => {
                let src = td
                    .select(&img_sel)
                    .next()
                    .and_then(|i| i.value().attr("src"))
                    .map(str::to_string)
                    .or_else(|| Some(text_of(td)).filter(|s| !s.is_empty()));
                record.image_url = src.map(|s| resolve(&s, ctx.url));
            }
            Slot::Column(column) => {
                let value = Some(text_of(td)).filter(|s| !s.is_empty());
                if column == "honoree" {
                    record.honoree_url = td
                        .select(&a_sel)
                        .next()
                        .and_then(|a| a.value().attr("href"))
                        .map(|h| resolve(h, ctx.url));
                }
                if let Some(field) = record.field_mut(column) {
                    *field = value;
                }
            }
        }
    }
    if recognized == 0 {
        return Err(IngestError::NotAStreetPage("infobox has no known rows".into()));
    }

    let heading = || {
        doc.select(&selector("h1"))
            .next()
            .map(text_of)
            .filter(|s| !s.is_empty())
    };
    record.street_name = street
        .or_else(heading)
        .ok_or_else(|| IngestError::NotAStreetPage("no street name".into()))?;
    record.source_url = ctx.url.map(str::to_string);
    Ok(record)
}
