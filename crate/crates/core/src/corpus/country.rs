//! Country/region reference tables joined against cuisines.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// The nine world regions used to tag cuisines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    Africa,
    EastAsia,
    EasternEurope,
    LatinAmerica,
    MiddleEast,
    NorthAmerica,
    Oceania,
    SouthAsia,
    WesternEurope,
}

impl Region {
    /// All regions in canonical (alphabetical-by-name) order.
    pub const ALL: [Region; 9] = [
        Region::Africa,
        Region::EastAsia,
        Region::EasternEurope,
        Region::LatinAmerica,
        Region::MiddleEast,
        Region::NorthAmerica,
        Region::Oceania,
        Region::SouthAsia,
        Region::WesternEurope,
    ];

    /// Full display name.
    pub fn name(self) -> &'static str {
        match self {
            Region::Africa => "Africa",
            Region::EastAsia => "East Asia",
            Region::EasternEurope => "Eastern Europe",
            Region::LatinAmerica => "Latin America",
            Region::MiddleEast => "Middle East",
            Region::NorthAmerica => "North America",
            Region::Oceania => "Oceania",
            Region::SouthAsia => "South Asia",
            Region::WesternEurope => "Western Europe",
        }
    }

    /// Two-letter code, accepted on input alongside the full name.
    pub fn code(self) -> &'static str {
        match self {
            Region::Africa => "AF",
            Region::EastAsia => "EA",
            Region::EasternEurope => "EE",
            Region::LatinAmerica => "LA",
            Region::MiddleEast => "ME",
            Region::NorthAmerica => "NA",
            Region::Oceania => "OC",
            Region::SouthAsia => "SA",
            Region::WesternEurope => "WE",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for Region {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Region, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for Region {
    type Err = Error;

    /// Accepts the full name (case-insensitive) or the two-letter code.
    fn from_str(s: &str) -> Result<Region> {
        let wanted = s.trim().to_lowercase();
        for region in Region::ALL {
            if wanted == region.name().to_lowercase() || wanted == region.code().to_lowercase() {
                return Ok(region);
            }
        }
        Err(Error::UnknownRegion {
            value: s.trim().to_string(),
        })
    }
}

/// Health statistics for one country; percentages lie in `[0, 100]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HealthStats {
    pub obesity_pct: f64,
    pub diabetes_pct: f64,
    pub health_expenditure_pct_gdp: f64,
}

/// Joinable reference tables: cuisine -> countries, country (or cuisine,
/// directly) -> region, and per-country health and migration figures.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CountryTables {
    pub cuisine_to_country: BTreeMap<String, Vec<String>>,
    pub country_to_region: BTreeMap<String, Region>,
    pub health: BTreeMap<String, HealthStats>,
    pub net_migration: BTreeMap<String, f64>,
}

impl CountryTables {
    /// Countries a cuisine maps to (possibly several).
    pub fn countries_of(&self, cuisine: &str) -> &[String] {
        self.cuisine_to_country
            .get(cuisine)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Region of a cuisine: a direct entry in the region table wins,
    /// otherwise the region of the first mapped country that has one.
    pub fn region_of_cuisine(&self, cuisine: &str) -> Option<Region> {
        if let Some(r) = self.country_to_region.get(cuisine) {
            return Some(*r);
        }
        self.countries_of(cuisine)
            .iter()
            .find_map(|c| self.country_to_region.get(c).copied())
    }
}

/// Load the three CSV tables:
/// `cuisine,country` (many-to-many), `country,region`, and
/// `country,obesity_pct,diabetes_pct,health_expenditure_pct_gdp,net_migration`.
///
/// Columns are found by header name, so column order is free. Unknown
/// region labels, non-numeric or out-of-range health values, and
/// duplicate country rows are errors.
pub fn load_country_tables(
    cuisine_country_path: &Path,
    country_region_path: &Path,
    country_health_path: &Path,
) -> Result<CountryTables> {
    let mut tables = CountryTables::default();

    for row in read_csv(cuisine_country_path, &["cuisine", "country"])? {
        let [cuisine, country] = &row.fields[..] else {
            unreachable!()
        };
        let list = tables.cuisine_to_country.entry(cuisine.clone()).or_default();
        if !list.contains(country) {
            list.push(country.clone());
        }
    }

    for row in read_csv(country_region_path, &["country", "region"])? {
        let [country, region] = &row.fields[..] else {
            unreachable!()
        };
        let region = Region::from_str(region)?;
        if tables.country_to_region.insert(country.clone(), region).is_some() {
            return Err(row.malformed(country_region_path, "duplicate country"));
        }
    }

    let health_cols = [
        "country",
        "obesity_pct",
        "diabetes_pct",
        "health_expenditure_pct_gdp",
        "net_migration",
    ];
    for row in read_csv(country_health_path, &health_cols)? {
        let [country, obesity, diabetes, expenditure, migration] = &row.fields[..] else {
            unreachable!()
        };
        let parse = |name: &str, text: &str| -> Result<f64> {
            text.trim().parse::<f64>().map_err(|_| {
                row.malformed(country_health_path, &format!("non-numeric {name}: {text:?}"))
            })
        };
        let pct = |name: &str, text: &str| -> Result<f64> {
            let v = parse(name, text)?;
            if !(0.0..=100.0).contains(&v) {
                return Err(
                    row.malformed(country_health_path, &format!("{name} out of [0,100]: {v}"))
                );
            }
            Ok(v)
        };
        let stats = HealthStats {
            obesity_pct: pct("obesity_pct", obesity)?,
            diabetes_pct: pct("diabetes_pct", diabetes)?,
            health_expenditure_pct_gdp: pct("health_expenditure_pct_gdp", expenditure)?,
        };
        let migration = parse("net_migration", migration)?;
        if !migration.is_finite() {
            return Err(row.malformed(country_health_path, "non-finite net_migration"));
        }
        if tables.health.insert(country.clone(), stats).is_some() {
            return Err(row.malformed(country_health_path, "duplicate country"));
        }
        tables.net_migration.insert(country.clone(), migration);
    }

    Ok(tables)
}

struct CsvRow {
    line: usize,
    fields: Vec<String>,
}

impl CsvRow {
    fn malformed(&self, path: &Path, message: &str) -> Error {
        Error::Malformed {
            path: path.to_path_buf(),
            line: self.line,
            message: message.to_string(),
        }
    }
}

/// Read a CSV file, returning the named columns (in the order given)
/// for every record.
fn read_csv(path: &Path, columns: &[&str]) -> Result<Vec<CsvRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io {
                path: path.to_path_buf(),
                source: std::io::Error::other(e.to_string()),
            },
            _ => Error::Malformed {
                path: path.to_path_buf(),
                line: 0,
                message: e.to_string(),
            },
        })?;

    let headers = reader
        .headers()
        .map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let mut positions = Vec::with_capacity(columns.len());
    for wanted in columns {
        let pos = headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(wanted))
            .ok_or_else(|| Error::Malformed {
                path: path.to_path_buf(),
                line: 1,
                message: format!("missing column {wanted:?}"),
            })?;
        positions.push(pos);
    }

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2; // header is line 1
        let record = record.map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        })?;
        let mut fields = Vec::with_capacity(positions.len());
        for (&pos, wanted) in positions.iter().zip(columns) {
            let value = record.get(pos).unwrap_or("").trim();
            if value.is_empty() {
                return Err(Error::Malformed {
                    path: path.to_path_buf(),
                    line,
                    message: format!("empty {wanted:?} field"),
                });
            }
            fields.push(value.to_string());
        }
        rows.push(CsvRow { line, fields });
    }
    Ok(rows)
}
