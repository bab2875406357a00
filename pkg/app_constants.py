APP_NAME = "torusinv"
APP_VERSION = "0.1"

# numerics
NUMERIC_ZERO_FLOOR = 1e-12
DEFAULT_TOLERANCE = 1e-9
RECONSTRUCTION_SLACK = 10
MAX_RELATION_DEGREE = 5
MAX_NUMERIC_DEGREE = 6
RESOLVENT_MAX_DEGREE = 4

# decay constant feeding the packet experiment
DECAY_CONSTANT_TAUS = 3
DECAY_CONSTANT_SAMPLES = 200

# reproducibility
DEFAULT_SEED = 0
THREADS_ENV = "TORUSINV_THREADS"

DEFAULTS = {
    "enabled": True,
    "version": "v1_0",
    "display_name": None,
    "description": None,
    "default_format": "json",
}

# feature name == CLI command with dashes replaced by underscores
APP_FEATURES = {
    "psi": {
        "display_name": "Generator values",
        "description": "Evaluate every Psi_sigma at a matrix, optionally through a torus fixture",
    },
    "magic_decompose": {
        "display_name": "Semi-magic decomposition",
        "description": "Split a semi-magic square into permutation matrices",
    },
    "relations": {
        "display_name": "Relation lattice",
        "description": "Integer relations between the monomial generators",
    },
    "galois_verify": {
        "display_name": "Galois verification",
        "description": "Equivariance, orbit products and zero propagation on a torus fixture",
    },
    "discriminant": {
        "display_name": "Order discriminants",
        "description": "Relative and archimedean discriminants of a fixture's order",
    },
    "certify": {
        "display_name": "Integrality certificate",
        "description": "Denominator bound check of Psi_sigma(lambda) against the order discriminant",
    },
    "entropy_bounds": {
        "display_name": "Entropy bounds",
        "description": "Haar entropy and the two lower bounds for a diagonal flow",
    },
    "threshold": {
        "display_name": "Separation threshold",
        "description": "Bowen ball depth forcing rational returns into the torus",
    },
    "decay": {
        "display_name": "Decay experiment",
        "description": "Sampled decay of the generators on Bowen balls",
    },
    "pgl2_experiment": {
        "display_name": "PGL2 packets",
        "description": "Class pair table for real quadratic orders",
    },
    "acceptance": {
        "display_name": "Acceptance suite",
        "description": "Runs every acceptance criterion",
        "default_format": "text",
    },
}

# kernel operations each feature reaches; checked by the coverage test
FEATURE_OPERATIONS = {
    "psi": [
        "app.kernels.generators:psi_vector",
        "app.kernels.generators:psi0",
        "app.kernels.generators:psi1",
        "app.kernels.generators:psi_torus",
        "app.kernels.generators:psi_torus_dual",
        "app.kernels.generators:identity_fiber_test",
        "app.kernels.etale:dual_basis",
        "app.kernels.matrices:det",
    ],
    "magic_decompose": [
        "app.kernels.perms:birkhoff_decompose",
        "app.kernels.perms:perm_matrix",
        "app.kernels.perms:root_set",
        "app.kernels.perms:has_complete_root_set",
    ],
    "relations": [
        "app.kernels.relations:relation_kernel_basis",
        "app.kernels.relations:relation_monomials",
        "app.kernels.relations:verify_relation",
    ],
    "galois_verify": [
        "app.kernels.tori_galois:build_fixture",
        "app.kernels.tori_galois:lagrange_idempotents",
        "app.kernels.tori_galois:galois_equivariance_check",
        "app.kernels.tori_galois:galois_orbit_product",
        "app.kernels.tori_galois:zero_propagation",
        "app.kernels.tori_galois:orbit_char_poly",
        "app.kernels.perms:generate_subgroup",
        "app.kernels.perms:is_2transitive",
    ],
    "discriminant": [
        "app.kernels.discriminants:order_discriminant",
        "app.kernels.discriminants:archimedean_discriminant",
        "app.kernels.discriminants:archimedean_discriminant_lie",
        "app.kernels.discriminants:gram_sqrt",
    ],
    "certify": [
        "app.kernels.discriminants:integrality_certificate",
    ],
    "entropy_bounds": [
        "app.kernels.entropy_bowen:haar_entropy",
        "app.kernels.entropy_bowen:entropy_bounds",
        "app.kernels.entropy_bowen:rank_obstruction",
    ],
    "threshold": [
        "app.kernels.entropy_bowen:separation_threshold",
        "app.kernels.entropy_bowen:bowen_membership",
    ],
    "decay": [
        "app.kernels.entropy_bowen:decay_experiment",
        "app.kernels.entropy_bowen:psi_decay_bound",
        "app.kernels.entropy_bowen:sample_bowen_ball",
    ],
    "pgl2_experiment": [
        "app.kernels.pgl2_packets:disc_inner_product",
        "app.kernels.pgl2_packets:form_to_matrix",
        "app.kernels.pgl2_packets:psi_disc_identity",
        "app.kernels.pgl2_packets:ideal_class_reps",
        "app.kernels.pgl2_packets:packet_experiment",
    ],
    "acceptance": [
        "features.acceptance.v1_0.acceptance:acceptance_suite",
        "app.core.runner:run",
    ],
}
