"""Constants for reading rating, score and manifest tables."""

# Header alias table: lowercase alias -> canonical column name
HEADER_ALIASES: dict[str, str] = {
    # subject_id
    "subject_id": "subject_id",
    "subject": "subject_id",
    "observer": "subject_id",
    "rater": "subject_id",
    "participant": "subject_id",
    # sample_id
    "sample_id": "sample_id",
    "sample": "sample_id",
    "stimulus": "sample_id",
    "id": "sample_id",
    # sequence
    "sequence": "sequence",
    "content": "sequence",
    "source": "sequence",
    "seq": "sequence",
    # gqp
    "gqp": "gqp",
    "geometry_qp": "gqp",
    "geometry qp": "gqp",
    # tqp
    "tqp": "tqp",
    "texture_qp": "tqp",
    "texture qp": "tqp",
    "attribute_qp": "tqp",
    # score
    "score": "score",
    "rating": "score",
    "opinion": "score",
    "opinion_score": "score",
    # dmos
    "dmos": "dmos",
    "n_subjects": "n_subjects",
    "flags": "flags",
    # objective scores
    "metric": "metric",
    "metric_name": "metric",
    "value": "value",
    "s_final": "value",
    "objective": "value",
    "pooling": "pooling",
    "gamma": "gamma",
    "session": "session",
    # per-view scores
    "s_front": "s_front",
    "s_back": "s_back",
    "s_left": "s_left",
    "s_right": "s_right",
    "s_top": "s_top",
    "s_bottom": "s_bottom",
    # manifest
    "ref": "ref",
    "reference": "ref",
    "ref_path": "ref",
    "dist": "dist",
    "distorted": "dist",
    "dist_path": "dist",
}

RATINGS_COLUMNS = ("subject_id", "sample_id", "sequence", "gqp", "tqp", "score")
DMOS_COLUMNS = ("sample_id", "dmos")
OBJECTIVE_COLUMNS = ("sample_id", "metric", "value")
VIEW_SCORE_COLUMNS = ("sample_id", "s_front", "s_back", "s_left", "s_right", "s_top", "s_bottom")
MANIFEST_COLUMNS = ("ref", "dist")

SESSIONS = ("human", "object")
FLAG_SEPARATOR = ";"
REPORT_COLUMNS = ("session", "metric", "plcc", "srocc", "krocc", "rmse", "n", "b1", "b2", "b3", "b4", "b5")
