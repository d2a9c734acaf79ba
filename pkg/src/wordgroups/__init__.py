"""Group words by the statistical similarity of their contexts.

The pipeline: tokenize a corpus, pick the most frequent words as targets,
represent each one by the probability distribution of context words inside
a moving window, measure Euclidean or Spearman dissimilarities between the
resulting vectors, and cluster them hierarchically.  An online competitive
network clusters individual word occurrences (word identity plus context),
so the same word can fall into different clusters in different contexts.
"""

from wordgroups._kernels import BACKEND as kernel_backend
from wordgroups.compnet import (CompetitiveNetwork, NetworkConfig,
                                OccurrenceBatch, encode_occurrences)
from wordgroups.cooccur import (ContextVectorSet, CooccurrenceTable,
                                WindowConfig, count, to_vectors)
from wordgroups.corpus import (Vocabulary, build_vocabulary, select_top,
                               tokenize, tokenize_file)
from wordgroups.elman import Grammar, LabeledCorpus, default_grammar, generate
from wordgroups.evaluate import category_accuracy, group_f1, purity
from wordgroups.hcluster import (Dendrogram, Partition, agglomerate, cut,
                                 export, from_json, to_newick)
from wordgroups.metrics import (DistanceMatrix, euclidean, pairwise,
                                spearman_distance, spearman_rho)

__version__ = "0.1.0"

__all__ = [
    "CompetitiveNetwork", "ContextVectorSet", "CooccurrenceTable",
    "Dendrogram", "DistanceMatrix", "Grammar", "LabeledCorpus",
    "NetworkConfig", "OccurrenceBatch", "Partition", "Vocabulary",
    "WindowConfig", "agglomerate", "build_vocabulary", "category_accuracy",
    "count", "cut", "default_grammar", "encode_occurrences", "euclidean",
    "export", "from_json", "generate", "group_f1", "kernel_backend",
    "pairwise", "purity", "select_top", "spearman_distance", "spearman_rho",
    "to_newick", "to_vectors", "tokenize", "tokenize_file",
]
