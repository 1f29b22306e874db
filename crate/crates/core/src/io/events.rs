use super::{content_lines, expect_magic, parse_num, FormatError};
use crate::event::AerEvent;

pub const EVENTS_MAGIC: &str = "THORSIM v1 events";

/// One event per line: `NEUR <src>`, `SYN <pre> <post>` or `LEAK`. The
/// header line is optional. Ids are checked against `n_neurons` when given.
pub fn parse_events(text: &str, n_neurons: Option<usize>) -> Result<Vec<AerEvent>, FormatError> {
    let mut lines = content_lines(text).peekable();
    expect_magic(&mut lines, EVENTS_MAGIC, true)?;
    let mut events = Vec::new();
    for (n, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let event = match tokens.as_slice() {
            ["NEUR", src] => AerEvent::Neuron {
                src: parse_num(n, "source id", src)?,
            },
            ["SYN", pre, post] => AerEvent::Synapse {
                pre: parse_num(n, "pre-synaptic id", pre)?,
                post: parse_num(n, "post-synaptic id", post)?,
            },
            ["LEAK"] => AerEvent::Leak,
            _ => return Err(FormatError::syntax(n, format!("malformed event `{line}`"))),
        };
        if let Some(limit) = n_neurons {
            event
                .validate(limit)
                .map_err(|e| FormatError::syntax(n, e.to_string()))?;
        }
        events.push(event);
    }
    Ok(events)
}

pub fn events_to_string(events: &[AerEvent]) -> String {
    let mut out = String::from(EVENTS_MAGIC);
    out.push('\n');
    for e in events {
        out.push_str(&e.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_file_is_empty_stream() {
        assert_eq!(parse_events("", Some(8)), Ok(vec![]));
        assert_eq!(parse_events("THORSIM v1 events\n# nothing\n", None), Ok(vec![]));
    }

    #[test]
    fn range_error_names_line() {
        let err = parse_events("NEUR 1\nNEUR 300\n", Some(256)).unwrap_err();
        assert_eq!(err.line(), Some(2));
        assert!(err.to_string().contains("300"));
    }

    #[test]
    fn malformed_lines() {
        for bad in ["NEUR", "NEUR 1 2", "SYN 1", "LEAK 3", "neur 1", "SPIKE 1", "NEUR x"] {
            let err = parse_events(&format!("LEAK\n{bad}\n"), None).unwrap_err();
            assert_eq!(err.line(), Some(2), "{bad}");
        }
        assert!(parse_events("THORSIM v1 network\n", None).is_err());
    }

    #[test]
    fn crlf_and_comments() {
        let text = "THORSIM v1 events\r\nNEUR 3 # first\r\n\r\nSYN 1 2\r\nLEAK\r\n";
        assert_eq!(
            parse_events(text, Some(4)).unwrap(),
            vec![
                AerEvent::Neuron { src: 3 },
                AerEvent::Synapse { pre: 1, post: 2 },
                AerEvent::Leak
            ]
        );
    }

    fn event() -> impl Strategy<Value = AerEvent> {
        prop_oneof![
            (0..1024usize).prop_map(|src| AerEvent::Neuron { src }),
            (0..1024usize, 0..1024usize).prop_map(|(pre, post)| AerEvent::Synapse { pre, post }),
            Just(AerEvent::Leak),
        ]
    }

    proptest! {
        #[test]
        fn round_trip(events in proptest::collection::vec(event(), 0..100)) {
            let text = events_to_string(&events);
            prop_assert_eq!(parse_events(&text, Some(1024)).unwrap(), events.clone());
            prop_assert_eq!(parse_events(&text.replace('\n', "\r\n"), Some(1024)).unwrap(), events);
        }
    }
}
