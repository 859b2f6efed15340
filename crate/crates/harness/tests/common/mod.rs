#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use dbk_core::metrics::WALL_CLOCK_COLUMNS;

/// JSON fields holding measured wall-clock time.
const WALL_CLOCK_KEYS: &[&str] = &["dbk_proc_time", "subsolver_time", "solve_time", "elapsed", "tts_opt"];

fn strip_csv(text: &str) -> String {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().expect("csv header").clone();
    let keep: Vec<usize> = (0..headers.len()).filter(|&i| !WALL_CLOCK_COLUMNS.contains(&&headers[i])).collect();
    let mut out = String::new();
    let mut push = |rec: &csv::StringRecord| {
        out.push_str(&keep.iter().map(|&i| &rec[i]).collect::<Vec<_>>().join(","));
        out.push('\n');
    };
    push(&headers);
    for rec in reader.records() {
        push(&rec.expect("csv record"));
    }
    out
}

fn strip_json(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            map.retain(|k, _| !WALL_CLOCK_KEYS.contains(&k.as_str()));
            map.values_mut().for_each(strip_json);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_json),
        _ => {}
    }
}

/// Every file under `dir` keyed by relative path, with wall-clock columns
/// and fields removed and everything else kept byte for byte.
pub fn snapshot(dir: &Path) -> BTreeMap<String, String> {
    let mut files = BTreeMap::new();
    collect(dir, dir, &mut files);
    files
}

fn collect(root: &Path, dir: &Path, files: &mut BTreeMap<String, String>) {
    let mut entries: Vec<_> = fs::read_dir(dir).expect("read dir").map(|e| e.expect("dir entry").path()).collect();
    entries.sort();
    for path in entries {
        if path.is_dir() {
            collect(root, &path, files);
            continue;
        }
        let text = fs::read_to_string(&path).expect("utf-8 output file");
        let text = match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => strip_csv(&text),
            Some("json") => {
                let mut v: serde_json::Value = serde_json::from_str(&text).expect("valid json");
                strip_json(&mut v);
                v.to_string()
            }
            _ => text,
        };
        files.insert(path.strip_prefix(root).unwrap().display().to_string(), text);
    }
}

/// Names of files whose normalized contents differ, including files present
/// in only one snapshot.
pub fn differences(a: &BTreeMap<String, String>, b: &BTreeMap<String, String>) -> Vec<String> {
    let mut names: Vec<&String> = a.keys().chain(b.keys()).collect();
    names.sort();
    names.dedup();
    names.into_iter().filter(|n| a.get(*n) != b.get(*n)).cloned().collect()
}
