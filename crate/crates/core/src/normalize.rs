use alloc::string::String;

/// Lowercases and collapses runs of whitespace to a single space, trimming
/// both ends. Used for instance-name duplicate detection and component
/// matching.
pub fn normalize_name(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for word in name.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        for c in word.chars() {
            out.extend(c.to_lowercase());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::normalize_name;

    #[test]
    fn collapses() {
        assert_eq!(normalize_name("  Consent \t Management\nService "), "consent management service");
        assert_eq!(normalize_name(""), "");
    }
}
