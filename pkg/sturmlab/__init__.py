from sturmlab.words import WordStream
from sturmlab.complexity import ComplexityProfile, QuasiSturmianFit, compute_profile
from sturmlab.sturmian import Morphism, Slope, fibonacci_word, mechanical_word
from sturmlab.arithmetic import CFExpansion, RationalInterval, certified_cf
from sturmlab.approximation import ApproximantRecord, RepetitionCertificate, ShapeDecomposition
from sturmlab.sunits import SUnitEquation, SUnitSolution
from sturmlab.specs import NumberSpec, parse_number_spec
from sturmlab.experiments import ExperimentReport
from sturmlab._version import __version__
