//! Text normalization shared by parsing, matching and canonicalization.
//!
//! Sources are inconsistent about accents, punctuation and case, so acronym
//! matching operates on plain ASCII letters and phrase lookup on lowercased,
//! punctuation-free keys.

/// Replace common Latin diacritics with their ASCII base letters.
///
/// Characters without a folding (CJK, Greek, symbols) pass through unchanged.
pub fn strip_diacritics(input: &str) -> String {
    let mut out = String::with_capacity(input.len());
    for ch in input.chars() {
        match fold_char(ch) {
            Some(folded) => out.push_str(folded),
            None => out.push(ch),
        }
    }
    out
}

fn fold_char(ch: char) -> Option<&'static str> {
    let folded = match ch {
        'à' | 'á' | 'â' | 'ã' | 'ä' | 'å' | 'ā' | 'ă' | 'ą' => "a",
        'À' | 'Á' | 'Â' | 'Ã' | 'Ä' | 'Å' | 'Ā' | 'Ă' | 'Ą' => "A",
        'ç' | 'ć' | 'ĉ' | 'ċ' | 'č' => "c",
        'Ç' | 'Ć' | 'Ĉ' | 'Ċ' | 'Č' => "C",
        'ď' | 'đ' | 'ð' => "d",
        'Ď' | 'Đ' => "D",
        'è' | 'é' | 'ê' | 'ë' | 'ē' | 'ĕ' | 'ė' | 'ę' | 'ě' => "e",
        'È' | 'É' | 'Ê' | 'Ë' | 'Ē' | 'Ĕ' | 'Ė' | 'Ę' | 'Ě' => "E",
        'ĝ' | 'ğ' | 'ġ' | 'ģ' => "g",
        'Ĝ' | 'Ğ' | 'Ġ' | 'Ģ' => "G",
        'ĥ' | 'ħ' => "h",
        'Ĥ' | 'Ħ' => "H",
        'ì' | 'í' | 'î' | 'ï' | 'ĩ' | 'ī' | 'ĭ' | 'į' | 'ı' => "i",
        'Ì' | 'Í' | 'Î' | 'Ï' | 'Ĩ' | 'Ī' | 'Ĭ' | 'Į' | 'İ' => "I",
        'ĵ' => "j",
        'Ĵ' => "J",
        'ķ' => "k",
        'Ķ' => "K",
        'ĺ' | 'ļ' | 'ľ' | 'ł' => "l",
        'Ĺ' | 'Ļ' | 'Ľ' | 'Ł' => "L",
        'ñ' | 'ń' | 'ņ' | 'ň' => "n",
        'Ñ' | 'Ń' | 'Ņ' | 'Ň' => "N",
        'ò' | 'ó' | 'ô' | 'õ' | 'ö' | 'ø' | 'ō' | 'ŏ' | 'ő' => "o",
        'Ò' | 'Ó' | 'Ô' | 'Õ' | 'Ö' | 'Ø' | 'Ō' | 'Ŏ' | 'Ő' => "O",
        'ŕ' | 'ŗ' | 'ř' => "r",
        'Ŕ' | 'Ŗ' | 'Ř' => "R",
        'ś' | 'ŝ' | 'ş' | 'š' => "s",
        'Ś' | 'Ŝ' | 'Ş' | 'Š' => "S",
        'ţ' | 'ť' | 'ŧ' => "t",
        'Ţ' | 'Ť' | 'Ŧ' => "T",
        'ù' | 'ú' | 'û' | 'ü' | 'ũ' | 'ū' | 'ŭ' | 'ů' | 'ű' | 'ų' => "u",
        'Ù' | 'Ú' | 'Û' | 'Ü' | 'Ũ' | 'Ū' | 'Ŭ' | 'Ů' | 'Ű' | 'Ų' => "U",
        'ŵ' => "w",
        'Ŵ' => "W",
        'ý' | 'ÿ' | 'ŷ' => "y",
        'Ý' | 'Ŷ' | 'Ÿ' => "Y",
        'ź' | 'ż' | 'ž' => "z",
        'Ź' | 'Ż' | 'Ž' => "Z",
        'æ' => "ae",
        'Æ' => "Ae",
        'œ' => "oe",
        'Œ' => "Oe",
        'ß' => "ss",
        _ => return None,
    };
    Some(folded)
}

/// Normalize an acronym token: fold diacritics, uppercase, keep letters only.
///
/// Returns an empty string when the token carries no letters at all.
pub fn normalize_acronym(token: &str) -> String {
    strip_diacritics(token)
        .chars()
        .filter(|c| c.is_ascii_alphabetic())
        .map(|c| c.to_ascii_uppercase())
        .collect()
}

/// Normalize a contribution phrase into a lookup key: fold diacritics,
/// lowercase, replace every non-alphanumeric run with a single space.
pub fn normalize_phrase(phrase: &str) -> String {
    let folded = strip_diacritics(phrase).to_lowercase();
    let mut out = String::with_capacity(folded.len());
    let mut pending_space = false;
    for ch in folded.chars() {
        if ch.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(ch);
        } else {
            pending_space = true;
        }
    }
    out
}

/// Split a name into its alphabetic words, diacritics folded.
pub fn words(name: &str) -> Vec<String> {
    strip_diacritics(name)
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| w.to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_common_latin_accents() {
        assert_eq!(strip_diacritics("São Paulo"), "Sao Paulo");
        assert_eq!(strip_diacritics("Müller-Łukasz"), "Muller-Lukasz");
        assert_eq!(strip_diacritics("Corrêa"), "Correa");
        assert_eq!(strip_diacritics("Straße"), "Strasse");
    }

    #[test]
    fn passes_through_unknown_chars() {
        assert_eq!(strip_diacritics("α-β 数"), "α-β 数");
    }

    #[test]
    fn acronym_keeps_letters_only() {
        assert_eq!(normalize_acronym("E.A.C."), "EAC");
        assert_eq!(normalize_acronym("drã2"), "DRA");
        assert_eq!(normalize_acronym("..."), "");
    }

    #[test]
    fn phrase_key_is_idempotent() {
        let key = normalize_phrase("  Wrote, the PAPER!  ");
        assert_eq!(key, "wrote the paper");
        assert_eq!(normalize_phrase(&key), key);
    }

    #[test]
    fn words_split_on_punctuation() {
        assert_eq!(
            words("University of São Paulo"),
            vec!["University", "of", "Sao", "Paulo"]
        );
        assert_eq!(
            words("The ALICE-Consortium"),
            vec!["The", "ALICE", "Consortium"]
        );
    }
}
