//! On-disk cache of exact q-expansions.
//!
//! Entries are keyed by `(module, name, weight, truncation, schema_version)`
//! and encoded in the file name, so a schema bump simply stops matching old
//! files. A request at truncation `N` is served by the smallest entry with
//! truncation `>= N`. Files appear atomically (temporary file, then a hard
//! link to the final name); writing an existing key must reproduce its
//! contents exactly.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde_json::{json, Value};
use sklift::numeric::{format_rational, parse_rational};
use sklift::qseries::QSeries;

pub const CACHE_SCHEMA_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "SKLIFT_CACHE_DIR";

static TMP_SERIAL: AtomicU64 = AtomicU64::new(0);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey {
    pub module: String,
    pub name: String,
    pub weight: u32,
    pub truncation: usize,
}

impl CacheKey {
    pub fn new(module: &str, name: &str, weight: u32, truncation: usize) -> Self {
        CacheKey {
            module: module.to_string(),
            name: name.to_string(),
            weight,
            truncation,
        }
    }

    fn prefix(&self) -> String {
        format!(
            "{}-{}-k{}-v{}-n",
            self.module, self.name, self.weight, CACHE_SCHEMA_VERSION
        )
    }

    fn file_name(&self) -> String {
        format!("{}{}.json", self.prefix(), self.truncation)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache I/O error at {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("corrupt cache entry {path}: {message}")]
    Corrupt { path: PathBuf, message: String },
    #[error("cache entry {path} already exists with different contents")]
    Conflict { path: PathBuf },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CacheError + '_ {
    move |source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// Explicit directory, else the environment override, else `~/.cache/sklift`.
    pub fn locate(explicit: Option<PathBuf>) -> Option<Self> {
        explicit
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
            .or_else(|| {
                std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("sklift"))
            })
            .map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// The smallest cached entry with truncation `>= key.truncation`,
    /// truncated to the request.
    pub fn load_series(&self, key: &CacheKey) -> Result<Option<QSeries>, CacheError> {
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(io_err(&self.dir)(e)),
        };
        let prefix = key.prefix();
        let mut best: Option<(usize, PathBuf)> = None;
        for entry in entries {
            let entry = entry.map_err(io_err(&self.dir))?;
            let name = entry.file_name().to_string_lossy().into_owned();
            let Some(n) = name
                .strip_prefix(&prefix)
                .and_then(|rest| rest.strip_suffix(".json"))
                .and_then(|n| n.parse::<usize>().ok())
            else {
                continue;
            };
            if n >= key.truncation && best.as_ref().map_or(true, |(b, _)| n < *b) {
                best = Some((n, entry.path()));
            }
        }
        let Some((n, path)) = best else {
            return Ok(None);
        };
        let series = read_entry(
            &path,
            &CacheKey {
                truncation: n,
                ..key.clone()
            },
        )?;
        Ok(Some(series.truncate(key.truncation)))
    }

    pub fn store_series(&self, key: &CacheKey, series: &QSeries) -> Result<PathBuf, CacheError> {
        if series.truncation() != key.truncation {
            return Err(CacheError::Corrupt {
                path: self.dir.join(key.file_name()),
                message: format!(
                    "series has truncation {}, key says {}",
                    series.truncation(),
                    key.truncation
                ),
            });
        }
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let path = self.dir.join(key.file_name());
        let body = encode(key, series);
        let serial = TMP_SERIAL.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(
            ".{}.{}-{serial}.tmp",
            key.file_name(),
            std::process::id()
        ));
        {
            let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
            f.write_all(body.as_bytes()).map_err(io_err(&tmp))?;
            f.sync_all().map_err(io_err(&tmp))?;
        }
        let linked = fs::hard_link(&tmp, &path);
        let _ = fs::remove_file(&tmp);
        match linked {
            Ok(()) => Ok(path),
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                let existing = read_entry(&path, key)?;
                if existing == *series {
                    Ok(path)
                } else {
                    Err(CacheError::Conflict { path })
                }
            }
            Err(e) => Err(io_err(&path)(e)),
        }
    }
}

fn encode(key: &CacheKey, series: &QSeries) -> String {
    let coeffs: Vec<String> = series.coeffs().iter().map(format_rational).collect();
    let v = json!({
        "schema_version": CACHE_SCHEMA_VERSION,
        "module": key.module,
        "name": key.name,
        "weight": key.weight,
        "truncation": key.truncation,
        "coefficients": coeffs,
    });
    format!("{v}\n")
}

fn read_entry(path: &Path, key: &CacheKey) -> Result<QSeries, CacheError> {
    let corrupt = |message: String| CacheError::Corrupt {
        path: path.to_path_buf(),
        message,
    };
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
    let header_ok = v["schema_version"] == json!(CACHE_SCHEMA_VERSION)
        && v["module"] == json!(key.module)
        && v["name"] == json!(key.name)
        && v["weight"] == json!(key.weight)
        && v["truncation"] == json!(key.truncation);
    if !header_ok {
        return Err(corrupt("header does not match the file name".into()));
    }
    let coeffs = v["coefficients"]
        .as_array()
        .ok_or_else(|| corrupt("missing coefficients".into()))?
        .iter()
        .map(|c| c.as_str().and_then(parse_rational))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| corrupt("unparsable coefficient".into()))?;
    if coeffs.len() != key.truncation + 1 {
        return Err(corrupt(format!(
            "{} coefficients for truncation {}",
            coeffs.len(),
            key.truncation
        )));
    }
    Ok(QSeries::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use sklift::numeric::{rat, rat_frac};

    fn series(n: usize) -> QSeries {
        QSeries::from_fn(n, |i| rat_frac(i as i64 * 7 - 3, 1 + i as i64 % 4))
    }

    #[test]
    fn miss_then_hit_then_reuse_larger() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("nested"));
        let key = CacheKey::new("kohnen", "plus_form", 10, 20);
        assert!(cache.load_series(&key).unwrap().is_none());
        cache.store_series(&key, &series(20)).unwrap();
        assert_eq!(cache.load_series(&key).unwrap(), Some(series(20)));
        let smaller = CacheKey::new("kohnen", "plus_form", 10, 8);
        assert_eq!(cache.load_series(&smaller).unwrap(), Some(series(8)));
        assert!(cache
            .load_series(&CacheKey::new("kohnen", "plus_form", 10, 21))
            .unwrap()
            .is_none());
        assert!(cache
            .load_series(&CacheKey::new("kohnen", "plus_form", 12, 8))
            .unwrap()
            .is_none());
    }

    #[test]
    fn smallest_sufficient_entry_wins() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        cache
            .store_series(&CacheKey::new("m", "s", 10, 30), &series(30))
            .unwrap();
        let mut other = series(12).into_coeffs();
        other[0] = rat(99);
        cache
            .store_series(
                &CacheKey::new("m", "s", 10, 12),
                &QSeries::new(other.clone()),
            )
            .unwrap();
        let got = cache
            .load_series(&CacheKey::new("m", "s", 10, 10))
            .unwrap()
            .unwrap();
        assert_eq!(got.coeff(0), &rat(99));
    }

    #[test]
    fn rewrite_must_match() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let key = CacheKey::new("m", "s", 10, 5);
        cache.store_series(&key, &series(5)).unwrap();
        cache.store_series(&key, &series(5)).unwrap();
        let mut c = series(5).into_coeffs();
        c[3] = rat(0);
        assert!(matches!(
            cache.store_series(&key, &QSeries::new(c)),
            Err(CacheError::Conflict { .. })
        ));
        assert!(cache.store_series(&key, &series(6)).is_err());
        // no temporary files left behind
        let names: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(names.len(), 1);
    }

    #[test]
    fn corrupt_entries_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let key = CacheKey::new("m", "s", 10, 3);
        fs::write(dir.path().join(key.file_name()), "{\"schema_version\": 1}").unwrap();
        assert!(matches!(
            cache.load_series(&key),
            Err(CacheError::Corrupt { .. })
        ));
    }

    #[test]
    fn concurrent_writers_agree() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let key = CacheKey::new("m", "s", 10, 40);
        std::thread::scope(|s| {
            for _ in 0..8 {
                s.spawn(|| cache.store_series(&key, &series(40)).unwrap());
            }
        });
        assert_eq!(cache.load_series(&key).unwrap(), Some(series(40)));
    }
}
