"""Planar shallow partitions: lower-bound instances, k-levels, crossing numbers."""
from .geometry import (Chain, Line, Point, dualize_line, dualize_point, general_position_check,
                       orient, side_of_line, upper_hull)
from .levels import LevelChain, ShallowLineClass, hull_conflicts, k_level, shallow_line_classes
from .adversary import (AdversaryInstance, ConstructionReport, build_block_line, build_chain,
                        build_instance, choose_beta, instance_report, pad_points)
from .partition import (CrossingCertificate, KPartition, baseline_partition,
                        coloring_from_partition, crossing_number, triangles_below,
                        validate_partition)
from .treecolor import (MultiColoredTree, SliceDecomposition, adversary_min_bruteforce,
                        greedy_colorful_path, slice_bound, slices, tree_from_instance,
                        validate_coloring)

__version__ = "0.1.0"
