//! Splitting standard input into input symbols.

use std::collections::VecDeque;
use std::io::{self, BufRead};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Whitespace-separated tokens.
    Tokens,
    /// Every non-whitespace character is a symbol.
    Chars,
    /// `<a>` is the call `a`, `</a>` the return `/a`, `<a/>` both, and every
    /// whitespace-separated word of text an internal symbol. Attributes,
    /// comments, processing instructions and declarations are skipped.
    Xml,
}

/// Symbols read lazily, one line of input at a time.
pub struct TokenStream<R> {
    reader: R,
    mode: Mode,
    pending: VecDeque<String>,
    /// Inside `<…>`: the tag read so far.
    tag: Option<String>,
    line: String,
    done: bool,
}

impl<R: BufRead> TokenStream<R> {
    pub fn new(reader: R, mode: Mode) -> Self {
        TokenStream { reader, mode, pending: VecDeque::new(), tag: None, line: String::new(), done: false }
    }

    fn fill(&mut self) -> io::Result<()> {
        while self.pending.is_empty() && !self.done {
            self.line.clear();
            if self.reader.read_line(&mut self.line)? == 0 {
                self.done = true;
                break;
            }
            match self.mode {
                Mode::Tokens => self.pending.extend(self.line.split_whitespace().map(String::from)),
                Mode::Chars => {
                    self.pending.extend(self.line.chars().filter(|c| !c.is_whitespace()).map(String::from))
                }
                Mode::Xml => self.scan_xml(),
            }
        }
        Ok(())
    }

    fn scan_xml(&mut self) {
        let line = std::mem::take(&mut self.line);
        let mut text = String::new();
        for ch in line.chars() {
            match (&mut self.tag, ch) {
                (Some(tag), '>') => {
                    let tag = std::mem::take(tag);
                    self.tag = None;
                    push_tag(&mut self.pending, &tag);
                }
                (Some(tag), _) => tag.push(ch),
                (None, '<') => {
                    self.pending.extend(text.split_whitespace().map(String::from));
                    text.clear();
                    self.tag = Some(String::new());
                }
                (None, _) => text.push(ch),
            }
        }
        self.pending.extend(text.split_whitespace().map(String::from));
        self.line = line;
    }
}

fn push_tag(out: &mut VecDeque<String>, tag: &str) {
    let tag = tag.trim();
    if tag.starts_with('?') || tag.starts_with('!') {
        return;
    }
    if let Some(name) = tag.strip_prefix('/') {
        out.push_back(format!("/{}", name.trim()));
        return;
    }
    let (body, closed) = match tag.strip_suffix('/') {
        Some(body) => (body, true),
        None => (tag, false),
    };
    let Some(name) = body.split_whitespace().next() else { return };
    out.push_back(name.to_string());
    if closed {
        out.push_back(format!("/{name}"));
    }
}

impl<R: BufRead> Iterator for TokenStream<R> {
    type Item = io::Result<String>;

    fn next(&mut self) -> Option<Self::Item> {
        if let Err(e) = self.fill() {
            self.done = true;
            return Some(Err(e));
        }
        self.pending.pop_front().map(Ok)
    }
}
