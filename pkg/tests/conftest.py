import pytest

from intentweave import scanner

APPENDIX_EXAMPLE = (
    "<bpit>[PIT-Exposition] This paragraph provides background context by "
    "introducing Convolutional Neural Networks (CNNs) and stating their "
    "established success in image classification, setting the stage for the "
    "subsequent discussion. <epit> Convolutional neural networks (CNNs) have "
    "achieved state-of-the-art results in image classification "
    "<bcit>[CIT-BACKGROUND]: these citations provides foundational context "
    "linking CNN to major image classification tasks <ecit> [1] [2]. "
    "They have become a foundational tool."
)


@pytest.fixture
def appendix_example():
    return APPENDIX_EXAMPLE


@pytest.fixture(params=sorted(scanner.available_backends()))
def tokenize_backend(request):
    """Parametrizes over every importable scanner backend."""
    return scanner.available_backends()[request.param]


def report_counts(report):
    """(sections, paragraphs, paragraph intents, citation intents, citations)."""
    from intentweave.model import CitedClaim

    paragraphs = list(report.paragraphs())
    cintents = sum(
        len(seg.citation_intents)
        for p in paragraphs
        for seg in p.segments
        if isinstance(seg, CitedClaim)
    )
    return (
        len(report.sections),
        len(paragraphs),
        sum(1 for p in paragraphs if p.paragraph_intent is not None),
        cintents,
        len(report.citations()),
    )
