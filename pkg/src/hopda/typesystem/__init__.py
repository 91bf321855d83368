"""Types for higher-order pushdown runs.

Run descriptors summarize what a run starting at a stack cell can do:
which returns it makes, what the read input maps to in a chosen finite
monoid, and whether it still produces distinguished letters. Derivation
trees certify descriptors cell by cell, annotated stacks carry those
certificates, and the low/high/len measures turn well-formed
annotations into quantitative run-length bounds.
"""

from .annotated import (ACell, AnnotatedRun, AStack, CapExceeded,
                        TypeContext, TypesysError, WfReport, annotated_run,
                        conf, is_singular, merge, restrict, restrict_loose,
                        st, stack_from_segments, stack_to_json, successor,
                        top_cell, type_of, well_formed, well_formed_report)
from .composers import (Composer, ComposerError, composer_from_base,
                        is_composer, split_composer)
from .descriptors import (RunDescriptor, compose, descriptor, pair_set, red,
                          universe_size)
from .gallery import Gallery, chain_gallery, gallery, gallery_names, loop_gallery
from .inference import (BudgetedTypes, DerivBudget, Judgments, UniverseCap,
                        annotate_literal, derive_judgments,
                        singular_annotation, TypingSession,
                        types_of_configuration)
from .measures import (MeasureContext, MeasureError, MeasureOverflow,
                       fitted_context, measures, pow)
from .sexpr import (SexprError, parse_descriptor, parse_tree,
                    render_descriptor, render_tree)
from .trees import (DerivationTree, EmptyTree, PopTree, PushTree, ReadTree,
                    TreeError, check_tree, check_tree_full, empty_tree,
                    pop_tree, push_tree, read_tree, tree_depth, tree_symbol)

__all__ = [
    "ACell", "AStack", "AnnotatedRun", "BudgetedTypes", "CapExceeded",
    "Composer", "ComposerError", "DerivBudget", "DerivationTree",
    "EmptyTree", "Gallery", "Judgments", "MeasureContext", "MeasureError",
    "MeasureOverflow", "PopTree", "PushTree", "ReadTree", "RunDescriptor",
    "SexprError", "TreeError", "TypeContext", "TypesysError", "UniverseCap",
    "WfReport", "annotate_literal", "annotated_run", "chain_gallery",
    "check_tree", "check_tree_full", "compose", "composer_from_base", "conf",
    "derive_judgments", "descriptor", "empty_tree", "fitted_context",
    "gallery", "gallery_names", "is_composer", "is_singular", "loop_gallery",
    "measures",
    "merge", "pair_set", "parse_descriptor", "parse_tree", "pop_tree", "pow",
    "push_tree", "read_tree", "red", "render_descriptor", "render_tree",
    "restrict", "restrict_loose", "singular_annotation", "split_composer", "st",
    "stack_from_segments", "stack_to_json", "successor", "top_cell",
    "tree_depth", "tree_symbol", "type_of", "TypingSession",
    "types_of_configuration",
    "universe_size", "well_formed", "well_formed_report",
]
