"""vadarc: dialogue extraction and V/A/D emotional-arc analysis for
chaptered plain-text novels, with deterministic SVG output."""

from .analytics import (
    ExtremeReport,
    FrequencyTable,
    find_extremes,
    format_extremes,
    frequency_table,
    top_n,
)
from .corpus import (
    Chapter,
    RawCorpus,
    load_corpus,
    normalize_corpus,
    segment_chapters,
    write_chapter_files,
)
from .dialogue import (
    Utterance,
    compile_full_dialogue,
    extract_utterances,
    write_utterances_csv,
)
from .errors import PipelineError
from .lexicon import (
    ChapterScore,
    VadEntry,
    VadLexicon,
    load_vad_lexicon,
    score_corpus,
    score_tokens,
)
from .preprocess import (
    StopwordSet,
    TokenList,
    expand_contractions,
    load_stopwords,
    normalize_text,
    preprocess_pipeline,
    remove_stopwords,
    strip_punctuation,
    tokenize,
)
from .viz import (
    ChartSpec,
    CloudLayout,
    layout_word_cloud,
    render_cloud_grid,
    render_trajectory_chart,
    render_word_cloud,
)

__version__ = "0.1.0"
