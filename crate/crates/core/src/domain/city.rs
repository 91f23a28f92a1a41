use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{slug_enum, Source};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CityId {
    Paris,
    Vienna,
    London,
    NewYork,
}

slug_enum!(CityId, "city", {
    Paris => "paris",
    Vienna => "vienna",
    London => "london",
    NewYork => "newyork",
});

/// A WGS84 position. Serializes as a GeoJSON `[lon, lat]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct LonLat {
    pub lon: f64,
    pub lat: f64,
}

impl LonLat {
    pub const fn new(lon: f64, lat: f64) -> Self {
        Self { lon, lat }
    }

    pub fn in_wgs84_range(&self) -> bool {
        self.lon.is_finite()
            && self.lat.is_finite()
            && (-180.0..=180.0).contains(&self.lon)
            && (-90.0..=90.0).contains(&self.lat)
    }
}

impl From<[f64; 2]> for LonLat {
    fn from([lon, lat]: [f64; 2]) -> Self {
        Self { lon, lat }
    }
}

impl From<LonLat> for [f64; 2] {
    fn from(p: LonLat) -> Self {
        [p.lon, p.lat]
    }
}

/// Lon/lat rectangle, serialized in GeoJSON bbox order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct BoundingBox {
    pub min: LonLat,
    pub max: LonLat,
}

impl BoundingBox {
    pub const fn new(min_lon: f64, min_lat: f64, max_lon: f64, max_lat: f64) -> Self {
        Self {
            min: LonLat::new(min_lon, min_lat),
            max: LonLat::new(max_lon, max_lat),
        }
    }

    pub fn contains(&self, p: LonLat) -> bool {
        (self.min.lon..=self.max.lon).contains(&p.lon)
            && (self.min.lat..=self.max.lat).contains(&p.lat)
    }
}

impl From<[f64; 4]> for BoundingBox {
    fn from(b: [f64; 4]) -> Self {
        Self::new(b[0], b[1], b[2], b[3])
    }
}

impl From<BoundingBox> for [f64; 4] {
    fn from(b: BoundingBox) -> Self {
        [b.min.lon, b.min.lat, b.max.lon, b.max.lat]
    }
}

/// Where a city's raw records come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceDescriptor {
    /// SPARQL endpoint, or a saved SPARQL JSON results document.
    Wikidata {
        #[serde(default)]
        endpoint: Option<String>,
        #[serde(default)]
        file: Option<PathBuf>,
    },
    /// Structured wiki street pages: a directory of saved pages or a
    /// newline-separated URL list to crawl.
    Wikihistory {
        #[serde(default)]
        dir: Option<PathBuf>,
        #[serde(default)]
        urls: Option<PathBuf>,
        #[serde(default)]
        translate: bool,
    },
    /// Curated (one row per street) or annotated (one row per annotator)
    /// CSV file.
    Csv { path: PathBuf, source: Source },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CityConfig {
    pub city: CityId,
    pub display_name: String,
    pub bounding_box: BoundingBox,
    pub center: LonLat,
    pub year_range: (i32, i32),
    #[serde(default)]
    pub sources: Vec<SourceDescriptor>,
    /// Wikidata item of the city, used to scope the street query.
    #[serde(default)]
    pub wikidata_id: Option<String>,
}

/// Street counts of the curated four-city dataset as published. The live
/// sources have drifted since, so these are metadata only.
pub const PUBLISHED_TOTAL: u32 = 4932;

impl CityId {
    pub fn published_count(&self) -> u32 {
        match self {
            CityId::Paris => 1428,
            CityId::Vienna => 1662,
            CityId::London => 770,
            CityId::NewYork => 1072,
        }
    }
}

impl CityConfig {
    pub fn builtin(city: CityId) -> Self {
        let wikidata = SourceDescriptor::Wikidata {
            endpoint: Some("https://query.wikidata.org/sparql".into()),
            file: None,
        };
        match city {
            CityId::Paris => Self {
                city,
                display_name: "Paris".into(),
                bounding_box: BoundingBox::new(2.224, 48.815, 2.470, 48.902),
                center: LonLat::new(2.3522, 48.8566),
                year_range: (1202, 2011),
                sources: vec![wikidata],
                wikidata_id: Some("Q90".into()),
            },
            CityId::Vienna => Self {
                city,
                display_name: "Vienna".into(),
                bounding_box: BoundingBox::new(16.18, 48.12, 16.58, 48.33),
                center: LonLat::new(16.3738, 48.2082),
                year_range: (1778, 2018),
                sources: vec![SourceDescriptor::Wikihistory {
                    dir: None,
                    urls: None,
                    translate: true,
                }],
                wikidata_id: Some("Q1741".into()),
            },
            CityId::London => Self {
                city,
                display_name: "London".into(),
                bounding_box: BoundingBox::new(-0.51, 51.28, 0.33, 51.69),
                center: LonLat::new(-0.1276, 51.5072),
                year_range: (1030, 2013),
                sources: Vec::new(),
                wikidata_id: Some("Q84".into()),
            },
            CityId::NewYork => Self {
                city,
                display_name: "New York".into(),
                bounding_box: BoundingBox::new(-74.26, 40.49, -73.70, 40.92),
                center: LonLat::new(-74.0060, 40.7128),
                year_range: (1998, 2013),
                sources: Vec::new(),
                wikidata_id: Some("Q60".into()),
            },
        }
    }

    pub fn builtins() -> Vec<Self> {
        CityId::ALL.iter().map(|c| Self::builtin(*c)).collect()
    }

    /// Returns the broken invariants, if any.
    pub fn check(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if !self.bounding_box.contains(self.center) {
            problems.push(format!("{}: center outside bounding box", self.city));
        }
        if self.year_range.0 > self.year_range.1 {
            problems.push(format!("{}: year_range min > max", self.city));
        }
        problems
    }
}
