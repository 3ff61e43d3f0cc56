import pytest

from doodlesearch.query import (DOODLE_CLASSES, DOODLE_TO_ELEMENT,
                                ELEMENT_CLASSES, InvalidBBox, Sketch,
                                SketchElement, UnknownClass, add_element,
                                merge_compound_elements, parse_sketch_obj,
                                remove_last_element, sketch_to_obj)
from doodlesearch.strokes import NormBBox


def el(klass, bbox, source=None):
    return SketchElement(klass, NormBBox(*bbox), source)


class TestVocabulary:
    def test_doodle_class_count(self):
        assert len(DOODLE_CLASSES) == 23

    def test_element_class_count(self):
        assert len(ELEMENT_CLASSES) == 24

    def test_placeholder_mappings(self):
        assert DOODLE_TO_ELEMENT["squiggle"] == "text"
        assert DOODLE_TO_ELEMENT["jail_window"] == "image"
        assert DOODLE_TO_ELEMENT["cloud"] == "default_icon"
        assert DOODLE_TO_ELEMENT["square"] == "container"
        assert DOODLE_TO_ELEMENT["house"] == "home"
        assert DOODLE_TO_ELEMENT["star"] == "star"

    def test_stylized_classes_map_to_themselves(self):
        for name in ("menu", "back", "checkbox", "left_arrow", "slider"):
            assert DOODLE_TO_ELEMENT[name] == name


class TestAddElement:
    def test_append(self):
        sketch = add_element(Sketch(), "menu", NormBBox(0, 0, 0.1, 0.05))
        assert len(sketch) == 1
        assert sketch.elements[0].klass == "menu"
        assert sketch.elements[0].source_doodle == "menu"

    def test_merge_fires_on_add(self):
        sketch = add_element(Sketch(), "square", NormBBox(0.1, 0.1, 0.4, 0.1))
        sketch = add_element(sketch, "squiggle", NormBBox(0.2, 0.12, 0.2, 0.05))
        assert len(sketch) == 1
        merged = sketch.elements[0]
        assert merged.klass == "text_button"
        assert merged.bbox == NormBBox(0.1, 0.1, 0.4, 0.1)
        assert merged.source_doodle is None

    def test_invalid_bbox(self):
        with pytest.raises(InvalidBBox):
            add_element(Sketch(), "menu", NormBBox(0.9, 0.9, 0.3, 0.3))

    def test_unknown_doodle(self):
        with pytest.raises(UnknownClass):
            add_element(Sketch(), "banana", NormBBox(0, 0, 0.1, 0.1))


class TestRemoveLast:
    def test_removes_last(self):
        sketch = Sketch((el("menu", (0, 0, 0.1, 0.1)),
                         el("avatar", (0.5, 0.5, 0.1, 0.1))))
        assert remove_last_element(sketch).elements == sketch.elements[:1]

    def test_empty_noop(self):
        assert remove_last_element(Sketch()) == Sketch()

    def test_merged_unit_removed_atomically(self):
        sketch = add_element(Sketch(), "square", NormBBox(0.1, 0.1, 0.4, 0.1))
        sketch = add_element(sketch, "squiggle", NormBBox(0.2, 0.12, 0.2, 0.05))
        assert remove_last_element(sketch) == Sketch()

    def test_add_then_remove_restores(self):
        before = add_element(Sketch(), "menu", NormBBox(0, 0, 0.1, 0.1))
        after = add_element(before, "star", NormBBox(0.5, 0.5, 0.2, 0.2))
        assert remove_last_element(after) == before


class TestMerge:
    def test_merge_takes_square_bbox(self):
        sketch = Sketch((el("container", (0.1, 0.1, 0.4, 0.1), "square"),
                         el("text", (0.2, 0.12, 0.2, 0.05), "squiggle")))
        merged = merge_compound_elements(sketch)
        assert len(merged) == 1
        assert merged.elements[0].klass == "text_button"
        assert merged.elements[0].bbox == NormBBox(0.1, 0.1, 0.4, 0.1)

    def test_containment_tolerance(self):
        # squiggle pokes 1.5% of canvas past the square edge: still merges
        sketch = Sketch((el("container", (0.1, 0.1, 0.3, 0.1), "square"),
                         el("text", (0.095, 0.12, 0.2, 0.05), "squiggle")))
        assert merge_compound_elements(sketch).elements[0].klass == "text_button"

    def test_beyond_tolerance_no_merge(self):
        sketch = Sketch((el("container", (0.1, 0.1, 0.3, 0.1), "square"),
                         el("text", (0.05, 0.12, 0.2, 0.05), "squiggle")))
        merged = merge_compound_elements(sketch)
        assert len(merged) == 2

    def test_other_nested_element_blocks_merge(self):
        sketch = Sketch((el("container", (0.1, 0.1, 0.5, 0.3), "square"),
                         el("text", (0.2, 0.15, 0.2, 0.05), "squiggle"),
                         el("star", (0.15, 0.25, 0.1, 0.1), "star")))
        merged = merge_compound_elements(sketch)
        assert len(merged) == 3

    def test_straddling_element_does_not_block(self):
        # star overlaps the square but is not contained in it
        sketch = Sketch((el("container", (0.1, 0.1, 0.4, 0.2), "square"),
                         el("text", (0.2, 0.15, 0.2, 0.05), "squiggle"),
                         el("star", (0.45, 0.25, 0.2, 0.2), "star")))
        merged = merge_compound_elements(sketch)
        assert len(merged) == 2
        assert {e.klass for e in merged.elements} == {"text_button", "star"}

    def test_largest_squiggle_wins_rest_kept(self):
        sketch = Sketch((el("container", (0.0, 0.0, 0.6, 0.4), "square"),
                         el("text", (0.05, 0.05, 0.1, 0.05), "squiggle"),
                         el("text", (0.1, 0.2, 0.4, 0.15), "squiggle")))
        merged = merge_compound_elements(sketch)
        assert len(merged) == 2
        classes = [e.klass for e in merged.elements]
        assert classes.count("text_button") == 1
        assert classes.count("text") == 1
        kept = next(e for e in merged.elements if e.klass == "text")
        assert kept.bbox == NormBBox(0.05, 0.05, 0.1, 0.05)

    def test_no_squares_is_identity(self):
        sketch = Sketch((el("menu", (0, 0, 0.1, 0.1), "menu"),
                         el("text", (0.2, 0.2, 0.2, 0.05), "squiggle")))
        assert merge_compound_elements(sketch) == sketch

    def test_idempotent(self):
        sketch = Sketch((el("container", (0.1, 0.1, 0.4, 0.1), "square"),
                         el("text", (0.2, 0.12, 0.2, 0.05), "squiggle"),
                         el("container", (0.6, 0.6, 0.3, 0.3), "square"),
                         el("star", (0.65, 0.65, 0.1, 0.1), "star")))
        once = merge_compound_elements(sketch)
        twice = merge_compound_elements(once)
        assert once == twice

    def test_two_constituents_drop_per_merge(self):
        sketch = Sketch((el("container", (0.0, 0.0, 0.4, 0.2), "square"),
                         el("text", (0.05, 0.05, 0.2, 0.05), "squiggle"),
                         el("container", (0.5, 0.5, 0.4, 0.2), "square"),
                         el("text", (0.55, 0.55, 0.2, 0.05), "squiggle"),
                         el("menu", (0.0, 0.8, 0.1, 0.1), "menu")))
        merged = merge_compound_elements(sketch)
        merges = sum(1 for e in merged.elements if e.klass == "text_button")
        assert merges == 2
        # each merge removes its two constituents and adds one compound
        assert len(merged) == len(sketch) - 2 * merges + merges
        assert not any(e.source_doodle in ("square", "squiggle")
                       for e in merged.elements)

    def test_merged_element_at_later_position(self):
        sketch = Sketch((el("container", (0.0, 0.0, 0.4, 0.2), "square"),
                         el("menu", (0.6, 0.1, 0.1, 0.1), "menu"),
                         el("text", (0.05, 0.05, 0.2, 0.05), "squiggle")))
        merged = merge_compound_elements(sketch)
        assert [e.klass for e in merged.elements] == ["menu", "text_button"]


class TestSketchFile:
    def test_parse_element_classes(self):
        sketch = parse_sketch_obj({"elements": [
            {"class": "menu", "bbox": [0, 0, 0.1, 0.1]},
            {"class": "text_button", "bbox": [0.2, 0.2, 0.3, 0.1]}]})
        assert [e.klass for e in sketch.elements] == ["menu", "text_button"]

    def test_raw_doodles_merge_on_load(self):
        sketch = parse_sketch_obj({"elements": [
            {"class": "square", "bbox": [0.1, 0.1, 0.4, 0.1]},
            {"class": "squiggle", "bbox": [0.2, 0.12, 0.2, 0.05]}]})
        assert [e.klass for e in sketch.elements] == ["text_button"]

    def test_unknown_class_rejected(self):
        with pytest.raises(UnknownClass):
            parse_sketch_obj({"elements": [
                {"class": "banana", "bbox": [0, 0, 0.1, 0.1]}]})

    def test_bad_bbox_rejected(self):
        with pytest.raises(InvalidBBox):
            parse_sketch_obj({"elements": [
                {"class": "menu", "bbox": [0.8, 0.8, 0.4, 0.1]}]})

    def test_round_trip(self):
        sketch = Sketch((el("menu", (0.0, 0.0, 0.1, 0.1)),
                         el("text", (0.2, 0.2, 0.3, 0.05))))
        loaded = parse_sketch_obj(sketch_to_obj(sketch))
        # classes and boxes survive; names that double as doodle classes
        # (menu) come back with their doodle identity attached
        assert [e.klass for e in loaded.elements] == ["menu", "text"]
        assert [e.bbox for e in loaded.elements] == [
            e.bbox for e in sketch.elements]
        assert loaded.elements[0].source_doodle == "menu"
        assert loaded.elements[1].source_doodle is None
