//! Absolute URI syntax (scheme, authority, path, query, fragment).
//!
//! The checker works component by component: it splits the input at the
//! delimiters that cannot occur inside earlier components, then validates
//! each piece against its character class. Positions are character offsets
//! into the input.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UriParts {
    pub scheme: String,
    pub authority: Option<String>,
    pub userinfo: Option<String>,
    pub host: Option<String>,
    pub port: Option<String>,
    pub path: String,
    pub query: Option<String>,
    pub fragment: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UriRejection {
    /// Offset (in characters) of the first character the grammar cannot
    /// account for; equal to the input length when input ends too early.
    pub position: usize,
    pub reason: &'static str,
}

impl fmt::Display for UriRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.reason, self.position)
    }
}

fn unreserved(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '-' | '.' | '_' | '~')
}

fn sub_delim(c: char) -> bool {
    matches!(c, '!' | '$' | '&' | '\'' | '(' | ')' | '*' | '+' | ',' | ';' | '=')
}

fn pchar(c: char) -> bool {
    unreserved(c) || sub_delim(c) || matches!(c, ':' | '@')
}

struct Scan<'a> {
    chars: &'a [char],
}

impl Scan<'_> {
    fn reject(position: usize, reason: &'static str) -> UriRejection {
        UriRejection { position, reason }
    }

    /// Validates `chars[from..to]` against `class`, allowing `%HH` escapes.
    fn run(
        &self,
        from: usize,
        to: usize,
        class: impl Fn(char) -> bool,
        reason: &'static str,
    ) -> Result<(), UriRejection> {
        let mut i = from;
        while i < to {
            let c = self.chars[i];
            if c == '%' {
                for k in 1..=2 {
                    if i + k >= to || !self.chars[i + k].is_ascii_hexdigit() {
                        return Err(Self::reject((i + k).min(to), "malformed percent-encoding"));
                    }
                }
                i += 3;
            } else if class(c) {
                i += 1;
            } else {
                return Err(Self::reject(i, reason));
            }
        }
        Ok(())
    }

    fn text(&self, from: usize, to: usize) -> String {
        self.chars[from..to].iter().collect()
    }

    fn find(&self, from: usize, to: usize, pred: impl Fn(char) -> bool) -> Option<usize> {
        (from..to).find(|&i| pred(self.chars[i]))
    }
}

fn h16_ok(group: &[char]) -> bool {
    (1..=4).contains(&group.len()) && group.iter().all(|c| c.is_ascii_hexdigit())
}

fn dotted_quad_ok(s: &[char]) -> bool {
    let text: String = s.iter().collect();
    let parts: Vec<&str> = text.split('.').collect();
    parts.len() == 4
        && parts.iter().all(|p| {
            !p.is_empty()
                && p.len() <= 3
                && p.bytes().all(|b| b.is_ascii_digit())
                && (p.len() == 1 || !p.starts_with('0'))
                && p.parse::<u16>().is_ok_and(|v| v <= 255)
        })
}

/// Counts 16-bit pieces in a colon-separated run, or None when malformed.
/// An IPv4 tail is permitted only when `allow_v4_tail` is set.
fn ipv6_pieces(s: &[char], allow_v4_tail: bool) -> Option<usize> {
    if s.is_empty() {
        return Some(0);
    }
    let groups: Vec<&[char]> = s.split(|&c| c == ':').collect();
    let mut count = 0;
    for (i, g) in groups.iter().enumerate() {
        let last = i + 1 == groups.len();
        if last && allow_v4_tail && g.contains(&'.') {
            if !dotted_quad_ok(g) {
                return None;
            }
            count += 2;
        } else if h16_ok(g) {
            count += 1;
        } else {
            return None;
        }
    }
    Some(count)
}

fn ipv6_ok(s: &[char]) -> bool {
    match s.windows(2).position(|w| w == [':', ':']) {
        None => ipv6_pieces(s, true) == Some(8),
        Some(at) => {
            let head = &s[..at];
            let tail = &s[at + 2..];
            if tail.windows(2).any(|w| w == [':', ':']) {
                return false;
            }
            match (ipv6_pieces(head, false), ipv6_pieces(tail, true)) {
                (Some(h), Some(t)) => h + t <= 7,
                _ => false,
            }
        }
    }
}

fn ipvfuture_ok(s: &[char]) -> bool {
    let Some(rest) = s.strip_prefix(&['v']).or_else(|| s.strip_prefix(&['V'])) else {
        return false;
    };
    let Some(dot) = rest.iter().position(|&c| c == '.') else {
        return false;
    };
    dot > 0
        && rest[..dot].iter().all(|c| c.is_ascii_hexdigit())
        && dot + 1 < rest.len()
        && rest[dot + 1..]
            .iter()
            .all(|&c| unreserved(c) || sub_delim(c) || c == ':')
}

/// Checks `value` against the absolute URI grammar (with optional
/// fragment) and decomposes it on success.
pub fn check_uri_syntax(value: &str) -> Result<UriParts, UriRejection> {
    let chars: Vec<char> = value.chars().collect();
    let scan = Scan { chars: &chars };
    let len = chars.len();

    // scheme
    match chars.first() {
        None => return Err(Scan::reject(0, "empty input")),
        Some(c) if !c.is_ascii_alphabetic() => return Err(Scan::reject(0, "scheme must start with a letter")),
        _ => {}
    }
    let mut i = 1;
    while i < len && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '+' | '-' | '.')) {
        i += 1;
    }
    if i == len || chars[i] != ':' {
        return Err(Scan::reject(i, "expected ':' after scheme"));
    }
    let scheme = scan.text(0, i);
    let hier_start = i + 1;

    let hier_end = scan.find(hier_start, len, |c| c == '?' || c == '#').unwrap_or(len);
    let (query_range, fragment_start) = match chars.get(hier_end) {
        Some('?') => {
            let q_end = scan.find(hier_end + 1, len, |c| c == '#').unwrap_or(len);
            (Some((hier_end + 1, q_end)), (q_end < len).then_some(q_end + 1))
        }
        Some('#') => (None, Some(hier_end + 1)),
        _ => (None, None),
    };

    let mut parts = UriParts {
        scheme,
        authority: None,
        userinfo: None,
        host: None,
        port: None,
        path: String::new(),
        query: None,
        fragment: None,
    };

    let path_start;
    if chars[hier_start..hier_end].starts_with(&['/', '/']) {
        let a_start = hier_start + 2;
        let a_end = scan.find(a_start, hier_end, |c| c == '/').unwrap_or(hier_end);
        let host_start = match scan.find(a_start, a_end, |c| c == '@') {
            Some(at) => {
                scan.run(
                    a_start,
                    at,
                    |c| unreserved(c) || sub_delim(c) || c == ':',
                    "invalid character in userinfo",
                )?;
                parts.userinfo = Some(scan.text(a_start, at));
                at + 1
            }
            None => a_start,
        };
        let host_end;
        if chars.get(host_start) == Some(&'[') && host_start < a_end {
            let close = scan
                .find(host_start, a_end, |c| c == ']')
                .ok_or_else(|| Scan::reject(a_end, "unterminated IP literal"))?;
            let inner = &chars[host_start + 1..close];
            if !(ipv6_ok(inner) || ipvfuture_ok(inner)) {
                return Err(Scan::reject(host_start + 1, "invalid IP literal"));
            }
            host_end = close + 1;
            if host_end < a_end && chars[host_end] != ':' {
                return Err(Scan::reject(
                    host_end,
                    "expected ':' or end of authority after IP literal",
                ));
            }
        } else {
            host_end = scan.find(host_start, a_end, |c| c == ':').unwrap_or(a_end);
            scan.run(
                host_start,
                host_end,
                |c| unreserved(c) || sub_delim(c),
                "invalid character in host",
            )?;
        }
        parts.host = Some(scan.text(host_start, host_end));
        if host_end < a_end {
            if let Some(bad) = scan.find(host_end + 1, a_end, |c| !c.is_ascii_digit()) {
                return Err(Scan::reject(bad, "port must be digits"));
            }
            parts.port = Some(scan.text(host_end + 1, a_end));
        }
        parts.authority = Some(scan.text(a_start, a_end));
        path_start = a_end;
    } else {
        path_start = hier_start;
    }
    scan.run(
        path_start,
        hier_end,
        |c| pchar(c) || c == '/',
        "invalid character in path",
    )?;
    parts.path = scan.text(path_start, hier_end);

    let tail_char = |c: char| pchar(c) || c == '/' || c == '?';
    if let Some((from, to)) = query_range {
        scan.run(from, to, tail_char, "invalid character in query")?;
        parts.query = Some(scan.text(from, to));
    }
    if let Some(from) = fragment_start {
        scan.run(from, len, tail_char, "invalid character in fragment")?;
        parts.fragment = Some(scan.text(from, len));
    }
    Ok(parts)
}
