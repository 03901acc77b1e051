//! Small parsers for the templated benchmark query formats.

use std::sync::OnceLock;

use regex::Regex;

use star_toolkit::graph::{McqOption, NodeId};

/// Matches a decimal literal, optionally signed, with optional exponent.
pub const NUM: &str = r"[-+]?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?";

fn cached(cell: &'static OnceLock<Regex>, pattern: &str) -> &'static Regex {
    cell.get_or_init(|| Regex::new(pattern).expect("static pattern"))
}

/// Every numeric literal in `text`, in order.
pub fn numbers(text: &str) -> Vec<f64> {
    static RE: OnceLock<Regex> = OnceLock::new();
    cached(&RE, NUM)
        .find_iter(text)
        .filter_map(|m| m.as_str().parse().ok())
        .collect()
}

/// `(x, y)` pairs written as parenthesized tuples.
pub fn tuples(text: &str) -> Vec<[f64; 2]> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = cached(&RE, &format!(r"\(\s*({NUM})\s*,\s*({NUM})\s*\)"));
    re.captures_iter(text)
        .filter_map(|c| Some([c[1].parse().ok()?, c[2].parse().ok()?]))
        .collect()
}

/// Directed edges written as `Node i → Node j`, with an optional
/// parenthesized weight such as `(weight 2.5)` or `(2.5)`.
pub fn graph_edges(text: &str) -> Vec<(NodeId, NodeId, Option<f64>)> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = cached(
        &RE,
        &format!(r"Node\s+(\d+)\s*(?:→|->|\\to|to)\s*Node\s+(\d+)(?:\s*\(\s*(?:weight\s*[:=]?\s*)?({NUM})\s*\))?"),
    );
    re.captures_iter(text)
        .filter_map(|c| {
            let w = c.get(3).and_then(|m| m.as_str().parse().ok());
            Some((c[1].parse().ok()?, c[2].parse().ok()?, w))
        })
        .collect()
}

const WORDS: [&str; 21] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
    "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty",
];

/// Parses `"5"` or `"five"` (case-insensitive).
pub fn count_word(s: &str) -> Option<usize> {
    let s = s.trim().to_ascii_lowercase();
    s.parse().ok().or_else(|| WORDS.iter().position(|w| *w == s))
}

/// Reads an option such as `"C: 5-node urban transport"` or
/// `"C. Five-node urban transport network"`.
pub fn mcq_option(text: &str) -> Option<McqOption> {
    static LABEL: OnceLock<Regex> = OnceLock::new();
    static NODES: OnceLock<Regex> = OnceLock::new();
    let c = cached(&LABEL, r"^\s*\(?([A-Za-z0-9])\s*[:.)]\s*(.*)$").captures(text)?;
    let expected_nodes = cached(&NODES, r"(?i)\b([a-z]+|\d+)[- ]node\b")
        .captures(&c[2])
        .and_then(|n| count_word(&n[1]));
    Some(McqOption { label: c[1].to_string(), expected_nodes })
}

/// Lettered options, one per line (`A. ...`).
pub fn mcq_options(text: &str) -> Vec<McqOption> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = cached(&RE, r"^\s*[A-H]\.\s*\S");
    text.lines().filter(|l| re.is_match(l)).filter_map(mcq_option).collect()
}

/// Numbered options written inline as `(0): Name (1): Name ...`.
pub fn numbered_options(text: &str) -> Vec<String> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = cached(&RE, r"\((\d+)\):\s*");
    let marks: Vec<(usize, usize)> = re.find_iter(text).map(|m| (m.start(), m.end())).collect();
    marks
        .iter()
        .enumerate()
        .map(|(i, &(_, body))| {
            let end = marks.get(i + 1).map_or(text.len(), |m| m.0);
            text[body..end].trim().trim_end_matches(',').trim().to_string()
        })
        .collect()
}

/// Normalizes `"north-east of"` and friends to a wedge option (1..=8).
pub fn direction_wedge(text: &str) -> Option<u8> {
    let key: String = text
        .to_ascii_lowercase()
        .trim()
        .trim_end_matches("of")
        .chars()
        .filter(|c| c.is_ascii_alphabetic())
        .collect();
    let names = ["north", "northeast", "east", "southeast", "south", "southwest", "west", "northwest"];
    names.iter().position(|n| *n == key).map(|i| i as u8 + 1)
}
