"""
Building the word-document matrix
=================================

Documents are the cases (rows) and words the variables (columns) of the
matrix every later step works on. This walk-through uses the bundled
eight-document micro corpus.
"""

from cowordmap.corpus import (
    TokenizerConfig,
    build_vocabulary,
    build_word_doc_matrix,
    load_corpus,
    tokenize,
)
from cowordmap.data import micro_corpus_dir

# Load one document per .txt file (lines of a single file work too).
corpus = load_corpus(micro_corpus_dir(), format="files")
print(f"documents: {len(corpus)}")

# Tokens are maximal letter/digit runs, lowercased, with stopwords removed.
cfg = TokenizerConfig()
print("first document tokens:", tokenize(corpus.documents[0], cfg)[:8], "...")

# The vocabulary is ordered by descending total frequency (ties: alphabetical).
vocab = build_vocabulary(corpus, cfg)
print(f"vocabulary: {len(vocab)} terms")
for term, tf, df in list(zip(vocab.terms, vocab.total_freq, vocab.doc_freq))[:5]:
    print(f"  {term:<12} total={tf}  in {df} documents")

# The count matrix prunes all-zero rows and columns, so margin-based
# statistics are always well defined.
m = build_word_doc_matrix(corpus, vocab, cfg)
print(f"matrix: {m.n_docs} x {m.n_terms}, total tokens {m.total}")
print("row margins:", m.row_margins.tolist())
