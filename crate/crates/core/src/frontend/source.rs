use std::collections::BTreeMap;

/// Maps byte offsets to 1-based (line, character column) pairs and back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineIndex {
    /// Byte offset at which each line starts. Always begins with 0.
    starts: Vec<u32>,
    len: u32,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut starts = vec![0u32];
        for (i, b) in text.bytes().enumerate() {
            if b == b'\n' {
                starts.push(i as u32 + 1);
            }
        }
        Self {
            starts,
            len: text.len() as u32,
        }
    }

    pub fn line_count(&self) -> usize {
        self.starts.len()
    }

    /// 1-based line containing `offset`.
    pub fn line_of(&self, offset: u32) -> u32 {
        match self.starts.binary_search(&offset) {
            Ok(i) => i as u32 + 1,
            Err(i) => i as u32,
        }
    }

    pub fn line_start(&self, line: u32) -> Option<u32> {
        self.starts.get(line.checked_sub(1)? as usize).copied()
    }

    /// Converts a byte offset to `(line, column)`, both 1-based, with the
    /// column counted in characters. Panics if `offset` is past the end of the
    /// text or not on a character boundary; that is a caller bug.
    pub fn location(&self, text: &str, offset: u32) -> (u32, u32) {
        assert!(offset <= self.len, "offset {offset} out of range");
        assert!(
            text.is_char_boundary(offset as usize),
            "offset {offset} splits a character"
        );
        let line = self.line_of(offset);
        let start = self.starts[line as usize - 1];
        let col = text[start as usize..offset as usize].chars().count() as u32 + 1;
        (line, col)
    }

    /// Inverse of [`location`](Self::location).
    pub fn offset(&self, text: &str, line: u32, col: u32) -> Option<u32> {
        let start = self.line_start(line)?;
        let end = self
            .starts
            .get(line as usize)
            .map(|s| s - 1)
            .unwrap_or(self.len);
        let want = col.checked_sub(1)? as usize;
        let seg = &text[start as usize..end as usize];
        let mut count = 0usize;
        for (i, _) in seg.char_indices() {
            if count == want {
                return Some(start + i as u32);
            }
            count += 1;
        }
        (count == want).then_some(end)
    }
}

/// Line number → comment text (including the leading `#`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommentTable {
    by_line: BTreeMap<u32, String>,
}

impl CommentTable {
    pub fn insert(&mut self, line: u32, text: String) {
        self.by_line.insert(line, text);
    }

    pub fn get(&self, line: u32) -> Option<&str> {
        self.by_line.get(&line).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &str)> {
        self.by_line.iter().map(|(l, t)| (*l, t.as_str()))
    }

    pub fn len(&self) -> usize {
        self.by_line.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_line.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn offset_zero_is_origin() {
        let t = "x = 1\n";
        assert_eq!(LineIndex::new(t).location(t, 0), (1, 1));
    }

    #[test]
    fn second_line() {
        let t = "a\nb";
        assert_eq!(LineIndex::new(t).location(t, 2), (2, 1));
    }

    #[test]
    fn columns_count_characters() {
        // In "é = 1" the '=' is character 3 but byte 4 (é is two bytes).
        let t = "é = 1";
        let off = t.find('=').unwrap() as u32;
        assert_eq!(off, 3);
        assert_eq!(LineIndex::new(t).location(t, off), (1, 3));
    }

    #[test]
    fn end_of_text_is_valid() {
        let t = "ab\n";
        let idx = LineIndex::new(t);
        assert_eq!(idx.location(t, 3), (2, 1));
        assert_eq!(idx.offset(t, 2, 1), Some(3));
    }

    #[test]
    fn offset_rejects_past_line_end() {
        let t = "ab\ncd";
        let idx = LineIndex::new(t);
        assert_eq!(idx.offset(t, 1, 3), Some(2));
        assert_eq!(idx.offset(t, 1, 4), None);
        assert_eq!(idx.offset(t, 3, 1), None);
    }

    proptest! {
        #[test]
        fn location_round_trips(text in "(\\PC|\n|\r){0,80}") {
            let idx = LineIndex::new(&text);
            for (off, _) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
                let (line, col) = idx.location(&text, off as u32);
                prop_assert_eq!(idx.offset(&text, line, col), Some(off as u32));
            }
        }
    }
}
