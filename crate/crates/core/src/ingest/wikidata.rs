//! Streets named after persons, from a Wikidata-style SPARQL endpoint.

use std::collections::HashMap;

use chrono::{DateTime, Utc};
use serde::Deserialize;

use super::{Fetcher, IngestError, RawRecord};
use crate::domain::{CityConfig, CityId, Source};

/// Wikidata class of human beings; eponyms outside it are dropped.
pub const HUMAN_CLASS: &str = "Q5";

/// Builds the street-eponym query for one city item (e.g. `Q90`). One row
/// per street; `?isHuman` tells whether the eponym is a person.
pub fn street_query(city_item: &str) -> String {
    format!(
        r#"PREFIX wd: <http://www.wikidata.org/entity/>
PREFIX wdt: <http://www.wikidata.org/prop/direct/>
PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
PREFIX schema: <http://schema.org/>
SELECT ?street (SAMPLE(?sl) AS ?streetLabel) (SAMPLE(?dl) AS ?districtLabel)
       (SAMPLE(?inception) AS ?denomination) ?eponym (SAMPLE(?el) AS ?eponymLabel) ?isHuman
       (SAMPLE(?gl) AS ?genderLabel) (SAMPLE(?ol) AS ?occupationLabel)
       (SAMPLE(?cl) AS ?countryLabel) (SAMPLE(?b) AS ?birth) (SAMPLE(?d) AS ?death)
       (SAMPLE(?a) AS ?article) (SAMPLE(?img) AS ?image)
WHERE {{
  ?street wdt:P31/wdt:P279* wd:Q83620 ;
          wdt:P131+ wd:{city_item} ;
          wdt:P138 ?eponym .
  BIND(EXISTS {{ ?eponym wdt:P31 wd:{HUMAN_CLASS} }} AS ?isHuman)
  ?street rdfs:label ?sl . FILTER(LANG(?sl) IN ("fr", "de", "en"))
  OPTIONAL {{ ?street wdt:P131 ?district . ?district rdfs:label ?dl . FILTER(LANG(?dl) = "en") }}
  OPTIONAL {{ ?street wdt:P571 ?inception . }}
  OPTIONAL {{ ?eponym rdfs:label ?el . FILTER(LANG(?el) = "en") }}
  OPTIONAL {{ ?eponym wdt:P21 ?g . ?g rdfs:label ?gl . FILTER(LANG(?gl) = "en") }}
  OPTIONAL {{ ?eponym wdt:P106 ?o . ?o rdfs:label ?ol . FILTER(LANG(?ol) = "en") }}
  OPTIONAL {{ ?eponym wdt:P27 ?c . ?c rdfs:label ?cl . FILTER(LANG(?cl) = "en") }}
  OPTIONAL {{ ?eponym wdt:P569 ?b . }}
  OPTIONAL {{ ?eponym wdt:P570 ?d . }}
  OPTIONAL {{ ?eponym wdt:P18 ?img . }}
  OPTIONAL {{ ?a schema:about ?eponym ; schema:isPartOf <https://en.wikipedia.org/> . }}
}}
GROUP BY ?street ?eponym ?isHuman
ORDER BY ?street"#
    )
}

#[derive(Debug, Deserialize)]
struct ResultsDocument {
    results: Results,
}

#[derive(Debug, Deserialize)]
struct Results {
    bindings: Vec<HashMap<String, Term>>,
}

#[derive(Debug, Deserialize)]
struct Term {
    #[serde(rename = "type")]
    kind: String,
    value: String,
}

fn value<'a>(binding: &'a HashMap<String, Term>, var: &str) -> Option<&'a str> {
    binding
        .get(var)
        .map(|t| t.value.trim())
        .filter(|v| !v.is_empty())
}

fn is_human(binding: &HashMap<String, Term>) -> bool {
    matches!(value(binding, "isHuman"), Some("true") | Some("1"))
}

/// Turns a SPARQL JSON results document into raw records, keeping only
/// bindings whose eponym is a person.
pub fn parse_sparql_results(
    body: &str,
    city: CityId,
    retrieved_at: DateTime<Utc>,
) -> Result<Vec<RawRecord>, IngestError> {
    let doc: ResultsDocument = serde_json::from_str(body)
        .map_err(|e| IngestError::MalformedResponse(e.to_string()))?;
    let mut out = Vec::new();
    for (i, b) in doc.results.bindings.iter().enumerate() {
        if let Some((var, term)) = b
            .iter()
            .find(|(_, t)| !matches!(t.kind.as_str(), "uri" | "literal" | "typed-literal" | "bnode"))
        {
            return Err(IngestError::MalformedResponse(format!(
                "binding {i}: `{var}` has unknown term type `{}`",
                term.kind
            )));
        }
        if !is_human(b) {
            continue;
        }
        let street = value(b, "streetLabel").ok_or_else(|| {
            IngestError::MalformedResponse(format!("binding {i} has no streetLabel"))
        })?;
        let get = |var: &str| value(b, var).map(str::to_string);
        let mut r = RawRecord::new(street, city, Source::Wikidata, retrieved_at);
        r.district = get("districtLabel");
        r.denomination = get("denomination");
        r.honoree_name = get("eponymLabel");
        r.gender = get("genderLabel");
        r.occupation = get("occupationLabel");
        r.country = get("countryLabel");
        r.dob = get("birth");
        r.dod = get("death");
        r.honoree_url = get("article");
        r.image_url = get("image");
        r.source_url = get("street");
        out.push(r);
    }
    Ok(out)
}

/// Client for one SPARQL endpoint.
#[derive(Debug, Clone)]
pub struct WikidataSource {
    endpoint: String,
    fetcher: Fetcher,
}

impl WikidataSource {
    pub fn new(endpoint: impl Into<String>, fetcher: Fetcher) -> Self {
        Self {
            endpoint: endpoint.into(),
            fetcher,
        }
    }

    pub fn fetch(&self, city: CityId) -> Result<Vec<RawRecord>, IngestError> {
        self.fetch_at(city, Utc::now())
    }

    /// As [`fetch`](Self::fetch), stamping records with `retrieved_at`.
    pub fn fetch_at(&self, city: CityId, retrieved_at: DateTime<Utc>) -> Result<Vec<RawRecord>, IngestError> {
        let item = CityConfig::builtin(city)
            .wikidata_id
            .unwrap_or_else(|| HUMAN_CLASS.to_string());
        let query = street_query(&item);
        let body = self.fetcher.send(&self.endpoint, |c| {
            c.get(&self.endpoint)
                .query(&[("query", query.as_str()), ("format", "json")])
                .header("Accept", "application/sparql-results+json")
        })?;
        parse_sparql_results(&body, city, retrieved_at)
    }
}

/// Queries `endpoint` for the city's person-named streets with the
/// default retry policy.
pub fn fetch_wikidata_streets(city: CityId, endpoint: &str) -> Result<Vec<RawRecord>, IngestError> {
    WikidataSource::new(endpoint, Fetcher::default()).fetch(city)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn at() -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2021, 6, 1, 0, 0, 0).unwrap()
    }

    fn binding(street: &str, eponym: &str, human: bool) -> serde_json::Value {
        serde_json::json!({
            "street": {"type": "uri", "value": format!("http://www.wikidata.org/entity/{street}")},
            "streetLabel": {"type": "literal", "value": street, "xml:lang": "fr"},
            "eponymLabel": {"type": "literal", "value": eponym},
            "isHuman": {"type": "literal", "value": human.to_string(),
                        "datatype": "http://www.w3.org/2001/XMLSchema#boolean"},
            "birth": {"type": "literal", "value": "1802-02-26T00:00:00Z",
                      "datatype": "http://www.w3.org/2001/XMLSchema#dateTime"}
        })
    }

    fn document(bindings: Vec<serde_json::Value>) -> String {
        serde_json::json!({"head": {"vars": []}, "results": {"bindings": bindings}}).to_string()
    }

    #[test]
    fn person_bindings_become_records() {
        let body = document(vec![
            binding("Rue Victor Hugo", "Victor Hugo", true),
            binding("Rue Colette", "Colette", true),
            binding("Rue Lamarck", "Jean-Baptiste Lamarck", true),
        ]);
        let out = parse_sparql_results(&body, CityId::Paris, at()).unwrap();
        assert_eq!(out.len(), 3);
        assert_eq!(out[0].honoree_name.as_deref(), Some("Victor Hugo"));
        assert_eq!(out[0].dob.as_deref(), Some("1802-02-26T00:00:00Z"));
        assert!(out.iter().all(|r| r.source == Source::Wikidata && r.retrieved_at == at()));
    }

    #[test]
    fn event_eponyms_are_excluded() {
        let body = document(vec![
            binding("Rue de Rivoli", "Battle of Rivoli", false),
            binding("Rue Colette", "Colette", true),
        ]);
        let out = parse_sparql_results(&body, CityId::Paris, at()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].street_name, "Rue Colette");
    }

    #[test]
    fn missing_person_flag_counts_as_non_person() {
        let mut b = binding("Rue X", "X", true);
        b.as_object_mut().unwrap().remove("isHuman");
        let out = parse_sparql_results(&document(vec![b]), CityId::Paris, at()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn zero_bindings() {
        assert!(parse_sparql_results(&document(vec![]), CityId::Paris, at())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn malformed_documents() {
        for body in [
            "not json",
            r#"{"head": {}}"#,
            r#"{"head": {}, "boolean": true}"#,
            r#"{"results": {"bindings": [{"x": {"value": "no type"}}]}}"#,
            r#"{"results": {"bindings": [{"x": {"type": "weird", "value": "v"}}]}}"#,
        ] {
            assert!(
                matches!(
                    parse_sparql_results(body, CityId::Paris, at()),
                    Err(IngestError::MalformedResponse(_))
                ),
                "{body}"
            );
        }
        let mut b = binding("Rue X", "X", true);
        b.as_object_mut().unwrap().remove("streetLabel");
        assert!(parse_sparql_results(&document(vec![b]), CityId::Paris, at()).is_err());
    }

    #[test]
    fn query_mentions_city_and_person_class() {
        let q = street_query("Q90");
        assert!(q.contains("wd:Q90"));
        assert!(q.contains("wd:Q5"));
        assert!(q.contains("wdt:P138"));
    }
}
