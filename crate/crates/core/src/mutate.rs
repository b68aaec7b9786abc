//! Single-sign mutations of theory sources, for negative controls.

/// Statements whose signs are mutated, in negative-control priority order.
const KINDS: [&str; 5] = ["brst", "gauge", "ni", "L", "def"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignSite {
    /// Byte offset of the `+`/`-`, or of the term that gets a leading `-`.
    pub offset: usize,
    pub line: usize,
    pub col: usize,
    /// Leading keyword of the statement.
    pub kind: &'static str,
    /// The term has no explicit sign; a `-` is inserted.
    pub insert: bool,
}

fn next_significant(src: &str, from: usize) -> Option<(usize, char)> {
    src[from..].char_indices().find(|(_, c)| !c.is_whitespace()).map(|(i, c)| (from + i, c))
}

/// Every sign of a summand inside expression statements (`brst`, `gauge`,
/// `ni`, `L`, `def`): explicit `+`/`-`, and unsigned leading terms after
/// `=`, `(` or `{`.
pub fn sign_sites(src: &str) -> Vec<SignSite> {
    let mut out = Vec::new();
    let mut kind: Option<&'static str> = None;
    let mut at_start = true;
    let mut word = String::new();
    let mut last_word = String::new();
    let mut depth = 0i32;
    let mut comment = false;
    let mut lines = vec![0usize];
    for (i, ch) in src.char_indices() {
        if ch == '\n' {
            lines.push(i + 1);
        }
    }
    let pos = |off: usize| {
        let line = lines.partition_point(|&s| s <= off);
        (line, src[lines[line - 1]..off].chars().count() + 1)
    };
    let mut push = |off: usize, kind: &'static str, insert: bool| {
        let (line, col) = pos(off);
        out.push(SignSite { offset: off, line, col, kind, insert });
    };
    for (i, ch) in src.char_indices() {
        if ch == '\n' {
            comment = false;
        }
        if comment {
            continue;
        }
        if ch == '#' {
            comment = true;
            continue;
        }
        if ch.is_alphanumeric() || ch == '_' {
            word.push(ch);
            continue;
        }
        if !word.is_empty() {
            if at_start {
                kind = KINDS.iter().copied().find(|k| *k == word);
                at_start = false;
            }
            last_word = std::mem::take(&mut word);
        }
        if ch.is_whitespace() {
            continue;
        }
        let opens_expr = match ch {
            '=' | '{' => true,
            '(' => last_word != "sum" && last_word != "d",
            _ => false,
        };
        last_word.clear();
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ';' if depth == 0 => {
                at_start = true;
                kind = None;
            }
            '+' | '-' => {
                if let Some(k) = kind {
                    push(i, k, false);
                }
            }
            _ => {}
        }
        if let (true, Some(k)) = (opens_expr, kind) {
            if let Some((j, c)) = next_significant(src, i + 1) {
                if c != '+' && c != '-' {
                    push(j, k, true);
                }
            }
        }
    }
    out
}

/// Toggle the sign at `site`, or prefix the term with `-`.
pub fn flip(src: &str, site: &SignSite) -> String {
    let mut s = src.to_string();
    if site.insert {
        s.insert(site.offset, '-');
    } else {
        let to = if &src[site.offset..site.offset + 1] == "-" { "+" } else { "-" };
        s.replace_range(site.offset..site.offset + 1, to);
    }
    s
}

/// The built-in negative control: the first sign of the highest-priority
/// statement kind present.
pub fn negative_control(src: &str) -> Option<SignSite> {
    let sites = sign_sites(src);
    KINDS.iter().find_map(|k| sites.iter().find(|s| s.kind == *k).cloned())
}

/// Up to `max` sites spread evenly over statements of the given kinds.
pub fn spread(src: &str, kinds: &[&str], max: usize) -> Vec<SignSite> {
    let sites: Vec<_> = sign_sites(src).into_iter().filter(|s| kinds.contains(&s.kind)).collect();
    if sites.len() <= max {
        return sites;
    }
    (0..max).map(|i| sites[i * sites.len() / max].clone()).collect()
}
