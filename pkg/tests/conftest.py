import hypothesis

hypothesis.settings.register_profile(
    "ci", derandomize=True, deadline=None, max_examples=25)
hypothesis.settings.load_profile("ci")

# Verdict lines recorded by the acceptance tests; replayed after the
# run so they stay visible under output capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

# Small parsable molecules used across test modules; all within the
# supported subset, atom counts 1 to 12.
CORPUS = [
    "C", "N", "O", "CC", "CO", "CN", "C=C", "C#C", "C#N", "CCO", "CCN",
    "COC", "CNC", "C=O", "CCC", "CC=O", "OCCO", "CC(C)C", "CC(=O)O",
    "C1CC1", "C1CCC1", "C1CCCC1", "c1ccccc1", "c1ccncc1", "CC(O)CN",
    "CCOC(=O)C", "[NH4+]", "[O-]C=O", "CN(C)C", "ClCCl", "BrCCBr", "FC(F)F",
    "IC", "SCC", "CS(=O)C", "PC", "C%10CC%10", "CC(C)(C)C", "OC1CCC1",
    "CCCCCCCCCCCC",
]
