# CloudChem Tests
