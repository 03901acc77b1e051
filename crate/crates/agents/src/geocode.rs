//! Reverse geocoding from a recorded fixture; never touches the network.

use std::sync::OnceLock;

use regex::Regex;

use star_toolkit::spatial::{haversine_distance, Point};

use crate::error::GeocodeError;
use crate::parse::NUM;

pub const DEFAULT_TOLERANCE_M: f64 = 5_000.0;

#[derive(Clone, Debug, PartialEq)]
pub struct GeocodeEntry {
    pub lat: f64,
    pub lon: f64,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Geocoder {
    entries: Vec<GeocodeEntry>,
    tolerance_m: f64,
}

impl Geocoder {
    pub fn new(entries: Vec<GeocodeEntry>) -> Self {
        Geocoder { entries, tolerance_m: DEFAULT_TOLERANCE_M }
    }

    pub fn with_tolerance(mut self, meters: f64) -> Self {
        self.tolerance_m = meters;
        self
    }

    pub fn entries(&self) -> &[GeocodeEntry] {
        &self.entries
    }

    /// Reads `lat, lon, name` records, one per line. Separators may be
    /// commas, tabs or spaces; everything after the second number is the
    /// name. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, GeocodeError> {
        static RE: OnceLock<Regex> = OnceLock::new();
        let re = RE.get_or_init(|| {
            Regex::new(&format!(r"^\s*({NUM})\s*[,\t ]\s*({NUM})\s*[,\t ]\s*(\S.*?)\s*$")).expect("static pattern")
        });
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let c = re.captures(t).ok_or_else(|| GeocodeError::Parse {
                line: i + 1,
                message: "expected `lat, lon, name`".into(),
            })?;
            let num = |s: &str| {
                s.parse::<f64>().map_err(|e| GeocodeError::Parse { line: i + 1, message: e.to_string() })
            };
            entries.push(GeocodeEntry { lat: num(&c[1])?, lon: num(&c[2])?, name: c[3].to_string() });
        }
        Ok(Geocoder::new(entries))
    }
}

/// Name of the nearest recorded coordinate within tolerance of `p`
/// (a geographic point, `x` = longitude).
pub fn geocode_lookup(p: &Point<f64>, client: &Geocoder) -> Result<String, GeocodeError> {
    if client.entries.is_empty() {
        return Err(GeocodeError::Empty);
    }
    let mut best: Option<(f64, &GeocodeEntry)> = None;
    for e in &client.entries {
        let q = Point::geographic(e.lon, e.lat).map_err(|err| GeocodeError::Parse { line: 0, message: err.to_string() })?;
        let d = haversine_distance(p, &q).map_err(|err| GeocodeError::Parse { line: 0, message: err.to_string() })?;
        if best.map_or(true, |(bd, _)| d < bd) {
            best = Some((d, e));
        }
    }
    match best {
        Some((d, e)) if d <= client.tolerance_m => Ok(e.name.clone()),
        _ => Err(GeocodeError::NoMatch { lat: p.y, lon: p.x, tolerance_m: client.tolerance_m }),
    }
}
