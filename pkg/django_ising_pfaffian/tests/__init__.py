# Tests for Django Visual Editor
